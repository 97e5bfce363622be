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

#include "blindlat/plainsig.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "blindlat/trapdoor.hpp"

namespace blindlat {

namespace {

constexpr std::uint8_t kVersion = 1;
enum class Kind : std::uint8_t { kVerificationKey = 1, kSigningKey = 2, kSignature = 3, kParams = 4 };
constexpr int kMaxResample = 100;

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

PlainParams plain_params(Index n, Index t, Index k, int d, const PlainConstants& c) {
  if (n < 2) throw ParameterError("plain_params: n must be at least 2");
  if (t < 1 || k < 1) throw ParameterError("plain_params: t and k must be positive");
  if (d < 0 || d > kMaxBarringtonDepth) throw ParameterError("plain_params: depth out of range");
  if (!(c.kappa > 0 && c.c_sign > 0 && c.delta > 0 && c.delta < 1 && c.c_q >= 1)) {
    throw ParameterError("plain_params: bad constants");
  }
  PlainParams p;
  p.n = n;
  p.t = t;
  p.k = k;
  p.d = d;
  p.constants = c;
  const double ceiling = 0x1p62;
  std::uint64_t q = next_prime(257);
  double omega = 0, need = 0, s_left = 0, s_right = 0;
  int rounds = 0;
  for (;; ++rounds) {
    if (rounds > 64) throw std::logic_error("plain_params: no fixed point");
    const Modulus mq(q);
    p.m = trap_gen_min_m(n, mq);
    const double m = static_cast<double>(p.m);
    omega = smoothing_factor(2 * p.m, c.delta);
    p.r_bound = c.c_sign * std::sqrt(2 * m) + c.kappa * std::pow(4.0, d) * std::pow(m, 1.5);
    s_left = kTrapGenConstant * std::sqrt(static_cast<double>(n) * std::log2(static_cast<double>(q))) * omega;
    s_right = std::sqrt(5.0) * std::sqrt(1 + p.r_bound * p.r_bound) * omega;
    p.s = std::max(s_left, s_right);
    p.sigsize = p.s * std::sqrt(2 * m);
    p.beta = p.sigsize * (1 + p.r_bound);
    need = p.beta * c.c_q * std::sqrt(static_cast<double>(n) * std::log2(static_cast<double>(n)));
    if (need >= ceiling) {
      throw ParameterError("plain_params: q would exceed 2^62; shrink d or n");
    }
    if (static_cast<double>(q) > need) break;
    q = next_prime(static_cast<std::uint64_t>(std::ceil(need)) + 1);
  }
  p.q = q;
  const double m = static_cast<double>(p.m);
  const double lg = std::ceil(std::log2(static_cast<double>(q)));
  p.report = {
      "n = " + std::to_string(n) + ", t = " + std::to_string(t) + ", k = " + std::to_string(k) +
          ", d = " + std::to_string(d),
      "m = " + std::to_string(p.m) + " >= 2 n ceil(log2 q) = " + std::to_string(2 * n * static_cast<Index>(lg)),
      fmt("|R|_2 bound = %.6g (kappa 4^d m^1.5 + c_sign sqrt(2m)), omega = %.6g", p.r_bound, omega),
      fmt("s = %.6g >= sqrt(5) * sqrt(1 + |R|^2) * omega = %.6g", p.s, s_right),
      fmt("s = %.6g >= |T_A~| bound * omega = %.6g", p.s, s_left),
      fmt("sigsize = s sqrt(2m) = %.6g (sqrt(2m) = %.6g)", p.sigsize, std::sqrt(2 * m)),
      fmt("beta = %.6g >= sigsize (1 + |R|_2) = %.6g", p.beta, p.sigsize * (1 + p.r_bound)),
      fmt("q = %.0f prime, > beta c_q sqrt(n log2 n) = %.6g", static_cast<double>(q), need),
      "fixed point reached after " + std::to_string(rounds + 1) + " rounds",
  };
  return p;
}

PlainParams plain_params_for(Index n, Index t, const Epsilon& epsilon, const PlainConstants& constants) {
  const NandCircuit c = prf_circuit(epsilon, t);
  PlainParams p = plain_params(n, t, kPrfKeyBits, c.depth(), constants);
  p.epsilon = epsilon;
  return p;
}

std::vector<EncodedBit> PlainVerificationKey::public_inputs(std::span<const std::uint8_t> msg) const {
  if (static_cast<Index>(msg.size()) != params.t) throw DimensionError("plain: message length differs from t");
  std::vector<EncodedBit> in;
  in.reserve(b.size() + msg.size());
  for (const auto& bi : b) in.push_back(EncodedBit::public_only(bi));
  for (auto bit : msg) in.push_back(EncodedBit::public_only(bit ? c1 : c0));
  return in;
}

ModMatrix PlainVerificationKey::prf_matrix(std::span<const std::uint8_t> msg) const {
  return eval_bv(circuit, public_inputs(msg), a).matrix;
}

ModMatrix PlainVerificationKey::f_matrix(std::span<const std::uint8_t> msg) const {
  return hcat(a, a_prime - prf_matrix(msg));
}

namespace {

void check_params(const PlainParams& p) {
  if (p.n < 2 || p.m < 1 || p.t < 1 || p.k < 1 || !(p.s > 0) || !(p.sigsize > 0)) {
    throw ParameterError("plain: invalid parameters");
  }
}

NandCircuit circuit_for(const PlainParams& p) {
  NandCircuit c = prf_circuit(p.epsilon, p.t);
  if (c.num_inputs() != p.k + p.t || c.depth() > p.d) {
    throw ParameterError("plain: parameters do not fit the PRF circuit");
  }
  return c;
}

IntMatrix random_signs(Index m, RandomStream& rng) {
  IntMatrix r(m, m);
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = rng.bit() ? 1 : -1;
  return r;
}

}  // namespace

PlainKeyPair plain_gen(const PlainParams& p, RandomStream& rng) {
  check_params(p);
  const Modulus q(p.q);
  TrapdoorKeyPair kp = trap_gen(p.n, q, p.m, rng);
  PlainVerificationKey vk{p,
                          kp.a,
                          ModMatrix::uniform(p.n, p.m, q, rng),
                          {},
                          ModMatrix(p.n, p.m, q),
                          ModMatrix(p.n, p.m, q),
                          circuit_for(p)};
  for (Index i = 0; i < p.k; ++i) vk.b.push_back(ModMatrix::uniform(p.n, p.m, q, rng));
  vk.c0 = ModMatrix::uniform(p.n, p.m, q, rng);
  vk.c1 = ModMatrix::uniform(p.n, p.m, q, rng);
  return {std::move(vk), PlainSigningKey{std::move(kp.t_a)}};
}

IntVector plain_sign(const PlainSigningKey& sk, const PlainVerificationKey& vk,
                     std::span<const std::uint8_t> msg, RandomStream& rng) {
  const ModMatrix right = vk.a_prime - vk.prf_matrix(msg);
  const ModMatrix zero(vk.params.n, 1, vk.a.modulus());
  for (int i = 0; i < kMaxResample; ++i) {
    IntVector d = sample_left(vk.a, right, sk.t_a, zero, vk.params.s, rng);
    if (!d.isZero()) return d;
  }
  throw std::runtime_error("plain_sign: resample limit exceeded");
}

bool plain_verify(const PlainVerificationKey& vk, std::span<const std::uint8_t> msg, const IntVector& sig) {
  if (static_cast<Index>(msg.size()) != vk.params.t) return false;
  if (sig.size() != 2 * vk.params.m || sig.isZero()) return false;
  if (sig.cast<double>().norm() > vk.params.sigsize) return false;
  return mat_mul(vk.f_matrix(msg), sig).is_zero();
}

std::vector<EncodedBit> ReductionState::secret_inputs(const PlainVerificationKey& vk,
                                                      std::span<const std::uint8_t> msg) const {
  if (static_cast<Index>(msg.size()) != vk.params.t) throw DimensionError("reduction: message length");
  std::vector<EncodedBit> in;
  for (std::size_t i = 0; i < vk.b.size(); ++i) {
    in.push_back({vk.b[i], EncodedBit::Secret{r_b[i], prf.key_bits[i] != 0}});
  }
  for (auto bit : msg) {
    in.push_back(bit ? EncodedBit{vk.c1, EncodedBit::Secret{r_c1, true}}
                     : EncodedBit{vk.c0, EncodedBit::Secret{r_c0, false}});
  }
  return in;
}

std::pair<IntMatrix, bool> ReductionState::combined_randomness(const PlainVerificationKey& vk,
                                                               std::span<const std::uint8_t> msg) const {
  EncodedBit out = eval_bv(vk.circuit, secret_inputs(vk, msg), vk.a);
  return {r_a_prime - out.secret->r, out.secret->x};
}

ReductionSetup reduction_gen(const PlainParams& p, const Epsilon& epsilon, const ModMatrix& challenge,
                             RandomStream& rng) {
  check_params(p);
  const Modulus q(p.q);
  if (challenge.rows() != p.n || challenge.cols() != p.m || challenge.modulus() != q) {
    throw DimensionError("reduction_gen: challenge must be n x m over q");
  }
  ReductionSetup r{{}, {}};
  r.state.prf = prf_gen(epsilon, p.t, rng);
  if (r.state.prf.circuit.num_inputs() != p.k + p.t || r.state.prf.circuit.depth() > p.d) {
    throw ParameterError("reduction_gen: parameters do not fit the PRF circuit");
  }
  const ModMatrix g = padded_gadget(p.n, q, p.m);
  auto encode = [&](const IntMatrix& rr, bool x) { return EncodedBit::encode(challenge, rr, x).matrix; };
  r.state.r_a_prime = random_signs(p.m, rng);
  for (Index i = 0; i < p.k; ++i) r.state.r_b.push_back(random_signs(p.m, rng));
  r.state.r_c0 = random_signs(p.m, rng);
  r.state.r_c1 = random_signs(p.m, rng);

  PlainVerificationKey& vk = r.vk;
  vk.params = p;
  vk.params.epsilon = epsilon;
  vk.a = challenge;
  vk.a_prime = encode(r.state.r_a_prime, true);
  for (Index i = 0; i < p.k; ++i) vk.b.push_back(encode(r.state.r_b[i], r.state.prf.key_bits[i] != 0));
  vk.c0 = encode(r.state.r_c0, false);
  vk.c1 = encode(r.state.r_c1, true);
  vk.circuit = r.state.prf.circuit;
  return r;
}

std::optional<IntVector> reduction_sign(const ReductionSetup& r, std::span<const std::uint8_t> msg,
                                        RandomStream& rng) {
  if (prf_eval(r.state.prf, msg)) return std::nullopt;
  const auto& p = r.vk.params;
  const Modulus q(p.q);
  auto [rr, bit] = r.state.combined_randomness(r.vk, msg);
  if (bit) throw std::logic_error("reduction_sign: evaluated bit disagrees with the PRF");
  const ModMatrix g = padded_gadget(p.n, q, p.m);
  const ShortBasis t_g = padded_gadget_basis(p.n, q, p.m);
  const ModMatrix zero(p.n, 1, q);
  for (int i = 0; i < kMaxResample; ++i) {
    IntVector d = sample_right(r.vk.a, g, rr, t_g, zero, p.s, rng);
    if (!d.isZero()) return d;
  }
  throw std::runtime_error("reduction_sign: resample limit exceeded");
}

IntVector reduction_extract(const ReductionSetup& r, std::span<const std::uint8_t> msg, const IntVector& sig) {
  const Index m = r.vk.params.m;
  if (sig.size() != 2 * m) throw DimensionError("reduction_extract: signature length");
  auto [rr, bit] = r.state.combined_randomness(r.vk, msg);
  (void)bit;
  return sig.head(m) + rr * sig.tail(m);
}

namespace {

void write_params(ByteWriter& w, const PlainParams& p) {
  w.u32(static_cast<std::uint32_t>(p.n)).u32(static_cast<std::uint32_t>(p.t));
  w.u32(static_cast<std::uint32_t>(p.k)).u32(static_cast<std::uint32_t>(p.d));
  w.u32(static_cast<std::uint32_t>(p.m)).u64(p.q);
  w.f64(p.s).f64(p.beta).f64(p.sigsize).f64(p.r_bound);
  w.u32(p.epsilon.num).u32(p.epsilon.den);
  w.f64(p.constants.kappa).f64(p.constants.c_sign).f64(p.constants.delta).f64(p.constants.c_q);
}

// Parameters are recomputed from (n, t, k, d, constants) and must match.
PlainParams read_params(ByteReader& r) {
  const Index n = r.u32(), t = r.u32(), k = r.u32();
  const int d = static_cast<int>(r.u32());
  const Index m = r.u32();
  const std::uint64_t q = r.u64();
  const double s = r.f64(), beta = r.f64(), sigsize = r.f64(), rb = r.f64();
  const std::uint32_t num = r.u32(), den = r.u32();
  PlainConstants c;
  c.kappa = r.f64();
  c.c_sign = r.f64();
  c.delta = r.f64();
  c.c_q = r.f64();
  PlainParams p;
  try {
    p = plain_params(n, t, k, d, c);
    p.epsilon = Epsilon(num, den);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("PBUS: ") + e.what());
  }
  if (p.m != m || p.q != q || p.s != s || p.beta != beta || p.sigsize != sigsize || p.r_bound != rb) {
    throw FormatError("PBUS: parameters are inconsistent");
  }
  return p;
}

ByteWriter start(Kind kind) {
  ByteWriter w;
  w.magic("PBUS").u8(kVersion).u8(static_cast<std::uint8_t>(kind));
  return w;
}

ByteReader open(ByteSpan data, Kind kind) {
  ByteReader r(data);
  r.expect_magic("PBUS");
  if (r.u8() != kVersion) throw FormatError("PBUS: unsupported version");
  if (r.u8() != static_cast<std::uint8_t>(kind)) throw FormatError("PBUS: unexpected object kind");
  return r;
}

ModMatrix read_block(ByteReader& r, const PlainParams& p) {
  ModMatrix x = read_mod_matrix(r);
  if (x.rows() != p.n || x.cols() != p.m || x.modulus().value() != p.q) throw FormatError("PBUS: matrix shape");
  return x;
}

}  // namespace

Bytes serialize(const PlainParams& p) {
  ByteWriter w = start(Kind::kParams);
  write_params(w, p);
  return std::move(w).take();
}

PlainParams parse_plain_params(ByteSpan data) {
  ByteReader r = open(data, Kind::kParams);
  PlainParams p = read_params(r);
  r.expect_done();
  return p;
}

Bytes serialize(const PlainVerificationKey& vk) {
  ByteWriter w = start(Kind::kVerificationKey);
  write_params(w, vk.params);
  write_mod_matrix(w, vk.a);
  write_mod_matrix(w, vk.a_prime);
  for (const auto& b : vk.b) write_mod_matrix(w, b);
  write_mod_matrix(w, vk.c0);
  write_mod_matrix(w, vk.c1);
  w.blob(as_bytes(vk.circuit.to_text()));
  return std::move(w).take();
}

PlainVerificationKey parse_plain_vk(ByteSpan data) {
  ByteReader r = open(data, Kind::kVerificationKey);
  PlainVerificationKey vk;
  vk.params = read_params(r);
  vk.a = read_block(r, vk.params);
  vk.a_prime = read_block(r, vk.params);
  for (Index i = 0; i < vk.params.k; ++i) vk.b.push_back(read_block(r, vk.params));
  vk.c0 = read_block(r, vk.params);
  vk.c1 = read_block(r, vk.params);
  Bytes text = r.blob();
  r.expect_done();
  vk.circuit = NandCircuit::parse(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
  if (vk.circuit.num_inputs() != vk.params.k + vk.params.t || vk.circuit.depth() > vk.params.d) {
    throw FormatError("PBUS: circuit does not fit the parameters");
  }
  return vk;
}

Bytes serialize(const PlainSigningKey& sk, const PlainParams& p) {
  ByteWriter w = start(Kind::kSigningKey);
  write_params(w, p);
  write_int_matrix(w, sk.t_a.basis());
  return std::move(w).take();
}

PlainSigningKey parse_plain_sk(ByteSpan data, const PlainVerificationKey& vk) {
  ByteReader r = open(data, Kind::kSigningKey);
  PlainParams p = read_params(r);
  IntMatrix t = read_int_matrix(r);
  r.expect_done();
  if (p.m != vk.params.m || p.q != vk.params.q || p.n != vk.params.n) throw FormatError("PBUS: key mismatch");
  if (t.rows() != p.m || t.cols() != p.m) throw FormatError("PBUS: basis shape");
  if (!mat_mul(vk.a, t).is_zero()) throw FormatError("PBUS: basis does not match key");
  try {
    return PlainSigningKey{ShortBasis(std::move(t))};
  } catch (const SingularBasis&) {
    throw FormatError("PBUS: singular basis");
  }
}

Bytes serialize_plain_signature(const IntVector& sig) {
  ByteWriter w = start(Kind::kSignature);
  write_int_vector(w, sig);
  return std::move(w).take();
}

IntVector parse_plain_signature(ByteSpan data) {
  ByteReader r = open(data, Kind::kSignature);
  IntVector v = read_int_vector(r);
  r.expect_done();
  return v;
}

}  // namespace blindlat
