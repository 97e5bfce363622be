// Copyright 2026 The blindlat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blindlat/biasedprf.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>

namespace blindlat {

Epsilon::Epsilon(std::uint32_t n, std::uint32_t d) : num(n), den(d) {
  if (d == 0 || d > (1u << 16) || n > d) throw ParameterError("epsilon must be num/den in [0,1] with den <= 2^16");
  const std::uint32_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

Epsilon Epsilon::from_double(double e) {
  if (!(e >= 0.0 && e <= 1.0)) throw ParameterError("epsilon must lie in [0,1]");
  return Epsilon(static_cast<std::uint32_t>(std::lround(e * 65536.0)), 1u << 16);
}

std::uint32_t Epsilon::threshold() const {
  const std::uint64_t scaled = (std::uint64_t{num} << 16) + den - 1;
  return static_cast<std::uint32_t>(scaled / den);
}

namespace {

// A wire or a known constant.
struct Sig {
  std::optional<bool> value;
  Wire wire = 0;
  static Sig constant(bool b) { return {b, 0}; }
  static Sig of(Wire w) { return {std::nullopt, w}; }
};

// Circuit builder with constant folding, double-negation removal and
// memoized gates.
class Builder {
 public:
  explicit Builder(Index inputs) : c_(inputs) {}

  Sig nand(Sig a, Sig b) {
    if (a.value && b.value) return Sig::constant(!(*a.value && *b.value));
    if (a.value) return *a.value ? negate(b) : Sig::constant(true);
    if (b.value) return *b.value ? negate(a) : Sig::constant(true);
    if (a.wire == b.wire) return negate(a);
    return Sig::of(gate(a.wire, b.wire));
  }
  Sig negate(Sig a) {
    if (a.value) return Sig::constant(!*a.value);
    if (auto it = neg_of_.find(a.wire); it != neg_of_.end()) return Sig::of(it->second);
    Wire w = gate(a.wire, a.wire);
    neg_of_[w] = a.wire;
    neg_of_[a.wire] = w;
    return Sig::of(w);
  }
  Sig and_(Sig a, Sig b) { return negate(nand(a, b)); }
  Sig or_(Sig a, Sig b) { return nand(negate(a), negate(b)); }
  Sig mux(Sig sel, Sig sel_bar, Sig if1, Sig if0) { return nand(nand(sel, if1), nand(sel_bar, if0)); }

  NandCircuit finish(Sig out) {
    if (out.value) {
      // 1 = NAND(x, NOT x) on input 0.
      Sig one = nand(Sig::of(0), negate(Sig::of(0)));
      out = *out.value ? one : negate(one);
    }
    c_.set_output(out.wire);
    return c_.pruned();
  }

 private:
  Wire gate(Wire u, Wire v) {
    auto key = std::minmax(u, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Wire w = c_.add_nand(key.first, key.second);
    memo_[key] = w;
    return w;
  }

  NandCircuit c_;
  std::map<std::pair<Wire, Wire>, Wire> memo_;
  std::map<Wire, Wire> neg_of_;
};

struct Cmp {
  Sig lt, le;
};

// (Y < T, Y <= T) for the derived bits y[lo..hi) against the matching bits
// of T, split in halves for logarithmic depth.
Cmp compare(Builder& b, const std::vector<Sig>& y, std::uint32_t t, int lo, int hi) {
  if (hi - lo == 1) {
    if ((t >> lo) & 1) return {b.negate(y[lo]), Sig::constant(true)};
    return {Sig::constant(false), b.negate(y[lo])};
  }
  const int mid = (lo + hi) / 2;
  Cmp h = compare(b, y, t, mid, hi), l = compare(b, y, t, lo, mid);
  return {b.or_(h.lt, b.and_(h.le, l.lt)), b.or_(h.lt, b.and_(h.le, l.le))};
}

}  // namespace

NandCircuit prf_circuit(const Epsilon& epsilon, Index t) {
  if (t < 1) throw ParameterError("prf: message length must be positive");
  Builder b(kPrfKeyBits + t);
  auto key = [](int i) { return Sig::of(static_cast<Wire>(i)); };
  auto msg = [&](Index i) { return Sig::of(static_cast<Wire>(kPrfKeyBits + i % t)); };
  const std::uint32_t threshold = epsilon.threshold();
  Sig out;
  if (threshold == 0 || threshold == (1u << 16)) {
    out = Sig::constant(threshold != 0);
  } else {
    // y_j = z_c ? (kappa_j ? z_a : z_b) : z_d over four consecutive message
    // bits (cyclically), so the top derived bits are independent once
    // t >= 8.
    std::vector<Sig> y;
    for (int j = 0; j < kDerivedBits; ++j) {
      const Index base = 4 * j;
      Sig za = msg(base), zb = msg(base + 1), zc = msg(base + 2), zd = msg(base + 3);
      Sig inner = b.mux(key(2 * j), key(2 * j + 1), za, zb);
      y.push_back(b.mux(zc, b.negate(zc), inner, zd));
    }
    out = compare(b, y, threshold, 0, kDerivedBits).lt;
  }
  return b.finish(out);
}

BiasedPrfKey prf_gen(const Epsilon& epsilon, Index t, RandomStream& rng) {
  BiasedPrfKey k;
  k.epsilon = epsilon;
  k.t = t;
  k.circuit = prf_circuit(epsilon, t);
  for (int j = 0; j < kDerivedBits; ++j) {
    const std::uint8_t bit = rng.bit();
    k.key_bits.push_back(bit);
    k.key_bits.push_back(1 - bit);
  }
  const double bound = kPrfDepthConstant * std::log2(static_cast<double>(kPrfKeyBits + t));
  if (k.circuit.depth() > bound) throw std::logic_error("prf: circuit deeper than the recorded bound");
  return k;
}

bool prf_eval(const BiasedPrfKey& key, std::span<const std::uint8_t> x) {
  if (static_cast<Index>(x.size()) != key.t) throw DimensionError("prf: message length differs from t");
  std::vector<std::uint8_t> in(key.key_bits);
  for (auto v : x) in.push_back(v ? 1 : 0);
  return key.circuit.evaluate(in);
}

Bytes serialize(const BiasedPrfKey& key) {
  ByteWriter w;
  w.magic("BPRF").u8(1).u32(static_cast<std::uint32_t>(key.t));
  w.u32(key.epsilon.num).u32(key.epsilon.den).f64(key.depth_constant);
  w.blob(key.key_bits);
  w.blob(as_bytes(key.circuit.to_text()));
  return std::move(w).take();
}

BiasedPrfKey parse_prf_key(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("BPRF");
  if (r.u8() != 1) throw FormatError("BPRF: unsupported version");
  BiasedPrfKey k;
  k.t = r.u32();
  const std::uint32_t num = r.u32(), den = r.u32();
  try {
    k.epsilon = Epsilon(num, den);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("BPRF: ") + e.what());
  }
  k.depth_constant = r.f64();
  k.key_bits = r.blob();
  Bytes text = r.blob();
  r.expect_done();
  if (k.t < 1 || static_cast<Index>(k.key_bits.size()) != kPrfKeyBits) throw FormatError("BPRF: bad shape");
  for (std::size_t i = 0; i < k.key_bits.size(); i += 2) {
    if (k.key_bits[i] > 1 || k.key_bits[i] + k.key_bits[i + 1] != 1) throw FormatError("BPRF: bad key bits");
  }
  k.circuit = NandCircuit::parse(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
  if (k.circuit.num_inputs() != kPrfKeyBits + k.t) throw FormatError("BPRF: circuit input count");
  return k;
}

}  // namespace blindlat
