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

#include "blindlat/homeval.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace blindlat {

NandCircuit::NandCircuit(Index num_inputs) : inputs_(num_inputs) {
  if (num_inputs < 1 || num_inputs > (Index{1} << 24)) {
    throw ParameterError("NandCircuit: input count out of range");
  }
  depth_.assign(static_cast<std::size_t>(num_inputs), 0);
}

Wire NandCircuit::add_nand(Wire u, Wire v) {
  const auto wires = static_cast<Wire>(num_wires());
  if (u >= wires || v >= wires) throw ParameterError("NandCircuit: gate reads an undefined wire");
  gates_.push_back({u, v});
  depth_.push_back(1 + std::max(depth_[u], depth_[v]));
  return wires;
}

void NandCircuit::set_output(Wire w) {
  if (w >= num_wires()) throw ParameterError("NandCircuit: output wire undefined");
  output_ = w;
}

std::vector<std::uint8_t> NandCircuit::evaluate_all(std::span<const std::uint8_t> x) const {
  if (static_cast<Index>(x.size()) != inputs_) throw DimensionError("NandCircuit: input length");
  std::vector<std::uint8_t> w(x.begin(), x.end());
  w.reserve(static_cast<std::size_t>(num_wires()));
  for (auto [l, r] : gates_) w.push_back(!(w[l] && w[r]));
  return w;
}

bool NandCircuit::evaluate(std::span<const std::uint8_t> x) const { return evaluate_all(x)[output_]; }

NandCircuit NandCircuit::pruned() const {
  std::vector<bool> live(static_cast<std::size_t>(num_wires()), false);
  live[output_] = true;
  for (Index g = static_cast<Index>(gates_.size()) - 1; g >= 0; --g) {
    if (!live[inputs_ + g]) continue;
    live[gates_[g].left] = live[gates_[g].right] = true;
  }
  NandCircuit out(inputs_);
  std::vector<Wire> remap(live.size());
  for (Index i = 0; i < inputs_; ++i) remap[i] = static_cast<Wire>(i);
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (!live[inputs_ + g]) continue;
    remap[inputs_ + g] = out.add_nand(remap[gates_[g].left], remap[gates_[g].right]);
  }
  out.set_output(remap[output_]);
  return out;
}

std::string NandCircuit::to_text() const {
  std::ostringstream s;
  s << "inputs " << inputs_ << '\n';
  for (auto [l, r] : gates_) s << "NAND " << l << ' ' << r << '\n';
  s << "output " << output_ << '\n';
  return s.str();
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_uint(std::string_view tok) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size() || (tok.size() > 1 && tok[0] == '0')) {
    throw FormatError("circuit: bad integer '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

NandCircuit NandCircuit::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.size() < 2) throw FormatError("circuit: missing header or footer");
  auto head = split_ws(lines.front());
  if (head.size() != 2 || head[0] != "inputs") throw FormatError("circuit: bad header");
  const std::uint64_t ell = parse_uint(head[1]);
  if (ell < 1 || ell > (1u << 24)) throw FormatError("circuit: input count out of range");
  NandCircuit c(static_cast<Index>(ell));
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    auto tok = split_ws(lines[i]);
    if (tok.size() != 3 || tok[0] != "NAND") throw FormatError("circuit: bad gate line");
    const std::uint64_t u = parse_uint(tok[1]), v = parse_uint(tok[2]);
    if (u >= static_cast<std::uint64_t>(c.num_wires()) || v >= static_cast<std::uint64_t>(c.num_wires())) {
      throw FormatError("circuit: gate reads an undefined wire");
    }
    c.add_nand(static_cast<Wire>(u), static_cast<Wire>(v));
  }
  auto foot = split_ws(lines.back());
  if (foot.size() != 2 || foot[0] != "output") throw FormatError("circuit: bad footer");
  const std::uint64_t w = parse_uint(foot[1]);
  if (w >= static_cast<std::uint64_t>(c.num_wires())) throw FormatError("circuit: output wire undefined");
  c.set_output(static_cast<Wire>(w));
  return c;
}

Perm then(const Perm& a, const Perm& b) {
  Perm r{};
  for (int i = 0; i < 5; ++i) r[i] = b[a[i]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r{};
  for (std::uint8_t i = 0; i < 5; ++i) r[p[i]] = i;
  return r;
}

bool is_five_cycle(const Perm& p) {
  std::uint8_t s = 0;
  for (int i = 1; i < 5; ++i) {
    s = p[s];
    if (s == 0) return false;
  }
  return p[s] == 0;
}

Index BranchingProgram::active_steps() const {
  return std::count_if(steps.begin(), steps.end(), [](const BpStep& s) { return !s.constant(); });
}

bool BranchingProgram::evaluate(std::span<const std::uint8_t> x) const {
  if (static_cast<Index>(x.size()) != num_inputs) throw DimensionError("program: input length");
  std::uint8_t s = 0;
  for (const auto& st : steps) s = (x[st.var] ? st.if1 : st.if0)[s];
  if (s == accept[0]) return true;
  if (s == 0) return false;
  throw std::logic_error("program: ended outside the accept/reject states");
}

namespace {

// Apply a, then b, then a^{-1}, then b^{-1}.
Perm commutator(const Perm& a, const Perm& b) {
  return then(then(then(a, b), inverse(a)), inverse(b));
}

const Perm kBase = commutator(kSigma, kTau);

// theta with theta^{-1} base theta = target as sequential products, i.e.
// target(theta(i)) = theta(base(i)).
Perm conjugator(const Perm& target) {
  Perm theta{};
  std::uint8_t b = 0, t = 0;
  for (int i = 0; i < 5; ++i) {
    theta[b] = t;
    b = kBase[b];
    t = target[t];
  }
  return theta;
}

// conj(p)(theta(i)) = theta(p(i)).
Perm conjugate(const Perm& p, const Perm& theta) {
  Perm r{};
  for (int i = 0; i < 5; ++i) r[theta[i]] = theta[p[i]];
  return r;
}

class Compiler {
 public:
  explicit Compiler(const NandCircuit& c) : c_(c), need_(static_cast<std::size_t>(c.num_wires())) {
    for (Index w = 0; w < c.num_wires(); ++w) {
      if (w < c.num_inputs()) {
        need_[w] = 1;
        continue;
      }
      auto g = c.gates()[w - c.num_inputs()];
      need_[w] = g.left == g.right ? need_[g.left] : 4 * std::max(need_[g.left], need_[g.right]);
    }
  }

  Index need(Wire w) const { return need_[w]; }

  // Appends exactly len >= need(w) steps whose product is target when w
  // is 1 and the identity otherwise.
  void emit(Wire w, const Perm& target, Index len, std::vector<BpStep>& out) const {
    const std::size_t begin = out.size();
    if (w < c_.num_inputs()) {
      out.push_back({w, kIdentityPerm, target});
    } else {
      auto g = c_.gates()[w - c_.num_inputs()];
      // NAND = NOT(AND); NOT appends target to the last step of a program
      // for target^{-1}.
      const Perm inv = inverse(target);
      if (g.left == g.right) {
        emit(g.left, inv, need_[w], out);
      } else {
        const Index sub = need_[w] / 4;
        const Perm theta = conjugator(inv);
        const Perm a = conjugate(kSigma, theta), b = conjugate(kTau, theta);
        emit(g.left, a, sub, out);
        emit(g.right, b, sub, out);
        emit(g.left, inverse(a), sub, out);
        emit(g.right, inverse(b), sub, out);
      }
      auto& last = out.back();
      last.if0 = then(last.if0, target);
      last.if1 = then(last.if1, target);
    }
    while (static_cast<Index>(out.size() - begin) < len) out.push_back({0, kIdentityPerm, kIdentityPerm});
  }

 private:
  const NandCircuit& c_;
  std::vector<Index> need_;
};

}  // namespace

BranchingProgram barrington(const NandCircuit& c) {
  const int d = c.depth();
  if (d > kMaxBarringtonDepth) throw ParameterError("barrington: depth exceeds the materialization guard");
  if (!is_five_cycle(kBase)) throw std::logic_error("barrington: base commutator is not a 5-cycle");
  Compiler comp(c);
  BranchingProgram bp;
  bp.num_inputs = c.num_inputs();
  bp.accept = kSigma;
  const Index len = Index{1} << (2 * d);
  bp.steps.reserve(static_cast<std::size_t>(len));
  comp.emit(c.output(), kSigma, len, bp.steps);
  return bp;
}

EncodedBit EncodedBit::encode(const ModMatrix& public_a, IntMatrix r, bool x) {
  const Modulus& q = public_a.modulus();
  ModMatrix m = mat_mul(public_a, r);
  if (x) m = m + padded_gadget(public_a.rows(), q, public_a.cols());
  return {std::move(m), Secret{std::move(r), x}};
}

double spectral_norm(const IntMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix<double>> svd(m.cast<double>());
  return svd.singularValues()(0);
}

namespace {

void check_encoding(const EncodedBit& e, const ModMatrix& a) {
  if (e.matrix.rows() != a.rows() || e.matrix.cols() != a.cols() || e.matrix.modulus() != a.modulus()) {
    throw DimensionError("encoding shape or modulus differs from A");
  }
  if (e.secret && (e.secret->r.rows() != a.cols() || e.secret->r.cols() != a.cols())) {
    throw DimensionError("encoding randomness must be m x m");
  }
}

// X * G^{-1}(V) without materializing the bit decomposition: for each row
// of X, gadget block and byte position, a 256-entry table of subset sums.
class GadgetProduct {
 public:
  explicit GadgetProduct(const ModMatrix& x) : q_(x.modulus()), n_(x.rows()), k_(q_.bits()) {
    bytes_ = (k_ + 7) / 8;
    table_.assign(static_cast<std::size_t>(n_ * n_ * bytes_ * 256), 0);
    for (Index i = 0; i < n_; ++i)
      for (Index r = 0; r < n_; ++r)
        for (Index p = 0; p < bytes_; ++p) {
          std::uint64_t* t = entry(i, r, p);
          for (unsigned v = 1; v < 256; ++v) {
            const int low = __builtin_ctz(v);
            const Index col = 8 * p + low;
            const std::uint64_t add = col < k_ ? x(i, r * k_ + col) : 0;
            t[v] = q_.add(t[v & (v - 1)], add);
          }
        }
  }

  // [X G^{-1}(V_0) | ... | X G^{-1}(V_4)].
  ModMatrix apply(const std::array<ModMatrix, 5>& vs) const {
    const Index m = vs[0].cols();
    ResidueMatrix out(n_, 5 * m);
    for (int a = 0; a < 5; ++a)
      for (Index i = 0; i < n_; ++i)
        for (Index c = 0; c < m; ++c) {
          std::uint64_t acc = 0;
          for (Index r = 0; r < n_; ++r) {
            std::uint64_t v = vs[a](r, c);
            for (Index p = 0; p < bytes_; ++p, v >>= 8) acc = q_.add(acc, entry(i, r, p)[v & 255]);
          }
          out(i, a * m + c) = acc;
        }
    return ModMatrix(std::move(out), q_);
  }

 private:
  std::uint64_t* entry(Index i, Index r, Index p) {
    return table_.data() + ((i * n_ + r) * bytes_ + p) * 256;
  }
  const std::uint64_t* entry(Index i, Index r, Index p) const {
    return table_.data() + ((i * n_ + r) * bytes_ + p) * 256;
  }

  Modulus q_;
  Index n_, k_, bytes_;
  std::vector<std::uint64_t> table_;
};

}  // namespace

EncodedBit eval_nand_gate(const EncodedBit& u, const EncodedBit& v, const ModMatrix& public_a) {
  check_encoding(u, public_a);
  check_encoding(v, public_a);
  const Index m = public_a.cols();
  const IntMatrix dv = ginv_bits(v.matrix, m);
  const ModMatrix g = padded_gadget(public_a.rows(), public_a.modulus(), m);
  EncodedBit w{g - mat_mul(u.matrix, dv), std::nullopt};
  if (u.secret && v.secret) {
    IntMatrix r = -(u.secret->r * dv);
    if (u.secret->x) r -= v.secret->r;
    const double nu = spectral_norm(u.secret->r), nv = spectral_norm(v.secret->r);
    const double bound = nu * static_cast<double>(m) + nv;
    if (spectral_norm(r) > bound * (1 + 1e-9) + 1e-9) {
      throw std::logic_error("eval_nand_gate: noise exceeds |R_u| m + |R_v|");
    }
    w.secret = EncodedBit::Secret{std::move(r), !(u.secret->x && v.secret->x)};
  }
  return w;
}

EncodedBit eval_gates(const NandCircuit& c, std::span<const EncodedBit> encodings,
                      const ModMatrix& public_a) {
  if (static_cast<Index>(encodings.size()) != c.num_inputs()) {
    throw DimensionError("eval: encoding count differs from circuit inputs");
  }
  std::vector<EncodedBit> w(encodings.begin(), encodings.end());
  for (const auto& e : w) check_encoding(e, public_a);
  for (auto [l, r] : c.gates()) w.push_back(eval_nand_gate(w[l], w[r], public_a));
  return w[c.output()];
}

EncodedBit eval_bv(const NandCircuit& c, std::span<const EncodedBit> encodings,
                   const ModMatrix& public_a) {
  if (static_cast<Index>(encodings.size()) != c.num_inputs()) {
    throw DimensionError("eval: encoding count differs from circuit inputs");
  }
  return eval_bv(barrington(c), encodings, public_a);
}

EncodedBit eval_bv(const BranchingProgram& bp, std::span<const EncodedBit> encodings,
                   const ModMatrix& public_a) {
  if (static_cast<Index>(encodings.size()) != bp.num_inputs) {
    throw DimensionError("eval: encoding count differs from program inputs");
  }
  for (const auto& e : encodings) check_encoding(e, public_a);
  const bool secret = std::all_of(encodings.begin(), encodings.end(),
                                  [](const EncodedBit& e) { return e.has_secret(); });
  const Modulus& q = public_a.modulus();
  const Index n = public_a.rows(), m = public_a.cols();

  // Encodings of the five state indicators.
  std::array<ModMatrix, 5> v{ModMatrix(n, m, q), ModMatrix(n, m, q), ModMatrix(n, m, q),
                             ModMatrix(n, m, q), ModMatrix(n, m, q)};
  v[0] = padded_gadget(n, q, m);
  std::array<Matrix<double>, 5> r;
  std::vector<Matrix<float>> rx_f;
  std::vector<Matrix<double>> rx_d;
  if (secret) {
    for (auto& ri : r) ri = Matrix<double>::Zero(m, m);
    // Products R_x D are exact in float while |R_x| * m < 2^24.
    for (const auto& e : encodings) {
      const double mx = e.secret->r.size() ? static_cast<double>(e.secret->r.cwiseAbs().maxCoeff()) : 0;
      if (mx * static_cast<double>(m) < 0x1p24) {
        rx_f.push_back(e.secret->r.cast<float>());
        rx_d.emplace_back();
      } else {
        rx_f.emplace_back();
        rx_d.push_back(e.secret->r.cast<double>());
      }
    }
  }

  std::vector<std::optional<GadgetProduct>> tables(encodings.size());
  IntMatrix d;
  if (secret) d.resize(m, 5 * m);
  for (const auto& st : bp.steps) {
    if (st.constant()) {
      // Pure relabelling of the state.
      const Perm inv = inverse(st.if0);
      std::array<ModMatrix, 5> nv = v;
      for (int j = 0; j < 5; ++j) nv[j] = v[inv[j]];
      v = std::move(nv);
      if (secret) {
        std::array<Matrix<double>, 5> nr;
        for (int j = 0; j < 5; ++j) nr[j] = std::move(r[inv[j]]);
        r = std::move(nr);
      }
      continue;
    }
    const EncodedBit& x = encodings[st.var];
    if (!tables[st.var]) tables[st.var].emplace(x.matrix);
    const ModMatrix xd = tables[st.var]->apply(v);
    const Perm inv0 = inverse(st.if0), inv1 = inverse(st.if1);
    std::array<ModMatrix, 5> nv = v;
    for (int j = 0; j < 5; ++j) {
      nv[j] = xd.block(0, inv1[j] * m, n, m) + v[inv0[j]] - xd.block(0, inv0[j] * m, n, m);
    }
    if (secret) {
      for (int a = 0; a < 5; ++a) d.middleCols(a * m, m) = ginv_bits(v[a], m);
      Matrix<double> rxd;
      if (rx_f[st.var].size()) {
        rxd = (rx_f[st.var] * d.cast<float>()).cast<double>();
      } else {
        rxd = rx_d[st.var] * d.cast<double>();
      }
      const bool bit = x.secret->x;
      std::array<Matrix<double>, 5> nr;
      for (int j = 0; j < 5; ++j) {
        nr[j] = rxd.middleCols(inv1[j] * m, m) - rxd.middleCols(inv0[j] * m, m) +
                r[bit ? inv1[j] : inv0[j]];
      }
      r = std::move(nr);
    }
    v = std::move(nv);
  }

  const int out = bp.accept[0];
  EncodedBit result{std::move(v[out]), std::nullopt};
  if (secret) {
    if (r[out].size() && r[out].cwiseAbs().maxCoeff() >= 0x1p52) {
      throw std::logic_error("eval_bv: randomness left the exact double range");
    }
    std::vector<std::uint8_t> bits;
    for (const auto& e : encodings) bits.push_back(e.secret->x);
    result.secret = EncodedBit::Secret{r[out].cast<std::int64_t>(), bp.evaluate(bits)};
  }
  return result;
}

}  // namespace blindlat
