// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/trapdoor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blindlat {
namespace {

void check_coset(const ModMatrix& f, const IntVector& x, const ModMatrix& u) {
  if (!(mat_mul(f, x) == u)) throw std::logic_error("sampler produced a vector outside the coset");
}

IntVector coset_representative(const ModMatrix& a, const ShortBasis& t_a, const ModMatrix& u) {
  if (u.rows() != a.rows() || u.cols() != 1) throw DimensionError("target must be an n x 1 column");
  if (u.is_zero()) return IntVector::Zero(a.cols());
  std::optional<IntVector> t0 = solve(a, u);
  if (!t0) throw std::domain_error("target outside the column span of A");
  return reduce_mod_basis(t_a, std::move(*t0));
}

// Discrete Gaussian over {x : a x = u} centered at zero.
IntVector coset_gaussian(const ModMatrix& a, const ShortBasis& t, const ModMatrix& u, double s,
                         RandomStream& rng) {
  IntVector c = coset_representative(a, t, u);
  IntVector v = sample_lattice(t, GaussParams(s), c, rng);
  return c - v;
}

}  // namespace

Index trap_gen_min_m(Index n, const Modulus& q) {
  return static_cast<Index>(std::ceil(2.0 * static_cast<double>(n) *
                                       std::log2(static_cast<double>(q.value())))) +
         2 * n;
}

TrapdoorKeyPair trap_gen(Index n, const Modulus& q, Index m, RandomStream& rng) {
  if (n < 1) throw ParameterError("trap_gen: n must be positive");
  if (m < trap_gen_min_m(n, q)) {
    throw ParameterError("trap_gen: m too small, need m >= " + std::to_string(trap_gen_min_m(n, q)));
  }
  const Index w = n * q.bits();
  const Index mbar = m - w;
  for (;;) {
    ModMatrix abar = ModMatrix::uniform(n, mbar, q, rng);
    IntMatrix rbar(mbar, w);
    for (Index i = 0; i < mbar; ++i)
      for (Index j = 0; j < w; ++j) rbar(i, j) = rng.bit() ? 1 : -1;
    ModMatrix g = gadget(n, q);
    ModMatrix a = hcat(abar, mat_mul(abar, rbar) + g);
    // A*[-Rbar; I] = G, so A always has full row rank; the check is kept as a
    // guard for any future change to the construction.
    if (rank(a) < n) continue;

    // T_A = [[I, -Rbar], [0, I]] * [[0, I], [S, W]] with W = ginv(-Abar):
    //   first w columns:   [-Rbar S; S]
    //   last mbar columns: [I - Rbar W; W]
    const IntMatrix s = gadget_basis(n, q).basis();
    const IntMatrix wm = ginv_bits(-abar, w);
    IntMatrix t(m, m);
    t.topLeftCorner(mbar, w) = -rbar * s;
    t.bottomLeftCorner(w, w) = s;
    t.topRightCorner(mbar, mbar) = IntMatrix::Identity(mbar, mbar) - rbar * wm;
    t.bottomRightCorner(w, mbar) = wm;
    ShortBasis basis(std::move(t));
    const double bound = kTrapGenConstant * std::sqrt(static_cast<double>(n) *
                                                      std::log2(static_cast<double>(q.value())));
    if (basis.gram_schmidt_norm() > bound) {
      throw std::logic_error("trap_gen: basis exceeds the recorded Gram-Schmidt bound");
    }
    return {std::move(a), std::move(basis)};
  }
}

ShortBasis gadget_basis(Index n, const Modulus& q) { return padded_gadget_basis(n, q, n * q.bits()); }

ShortBasis padded_gadget_basis(Index n, const Modulus& q, Index width) {
  const Index k = q.bits();
  if (width < n * k) throw ParameterError("gadget basis: width below n*k");
  IntMatrix s = IntMatrix::Zero(width, width);
  for (Index b = 0; b < n; ++b) {
    const Index o = b * k;
    for (Index i = 0; i + 1 < k; ++i) {
      s(o + i, o + i) = 2;
      s(o + i + 1, o + i) = -1;
    }
    for (Index i = 0; i < k; ++i) s(o + i, o + k - 1) = static_cast<std::int64_t>((q.value() >> i) & 1);
  }
  for (Index i = n * k; i < width; ++i) s(i, i) = 1;
  return ShortBasis(std::move(s));
}

IntVector sample_pre(const ModMatrix& a, const ShortBasis& t_a, const ModMatrix& u, double s,
                     RandomStream& rng) {
  if (t_a.dim() != a.cols()) throw DimensionError("sample_pre: basis dimension differs from m");
  IntVector x = coset_gaussian(a, t_a, u, s, rng);
  check_coset(a, x, u);
  return x;
}

IntVector sample_left(const ModMatrix& a, const ModMatrix& b, const ShortBasis& t_a,
                      const ModMatrix& u, double s, RandomStream& rng) {
  if (b.rows() != a.rows() || b.modulus() != a.modulus()) throw DimensionError("sample_left: shape");
  if (t_a.dim() != a.cols()) throw DimensionError("sample_left: basis dimension differs from m");
  const Index m = a.cols(), m1 = b.cols();
  const double need = t_a.gram_schmidt_norm() * smoothing_factor(m + m1);
  if (s < need) {
    throw WidthTooSmall("sample_left: s " + std::to_string(s) + " below " + std::to_string(need));
  }
  IntVector d(m + m1);
  IntVector d2(m1);
  if (m1 > 0) {
    const IntegerGaussian z{GaussParams(s)};
    for (Index i = 0; i < m1; ++i) d2(i) = z.sample(rng);
  }
  ModMatrix target = m1 > 0 ? u - mat_mul(b, d2) : u;
  d << coset_gaussian(a, t_a, target, s, rng), d2;
  check_coset(hcat(a, b), d, u);
  return d;
}

ShortBasis right_basis(const ModMatrix& a, const ModMatrix& b, const IntMatrix& r,
                       const ShortBasis& t_b) {
  const Index ma = a.cols(), mb = b.cols();
  if (b.rows() != a.rows() || b.modulus() != a.modulus()) throw DimensionError("right_basis: shape");
  if (r.rows() != ma || r.cols() != mb) throw DimensionError("right_basis: R must be m_A x m_B");
  if (t_b.dim() != mb) throw DimensionError("right_basis: basis dimension differs from m_B");
  // Short W with B W = -A, one reduced column at a time.
  IntMatrix w(mb, ma);
  const ModMatrix neg_a = -a;
  for (Index i = 0; i < ma; ++i) {
    std::optional<IntVector> w0 = solve(b, neg_a.col(i));
    if (!w0) throw std::domain_error("right_basis: B is not full rank");
    w.col(i) = reduce_mod_basis(t_b, std::move(*w0));
  }
  // [A | AR + B] [[I, -R], [0, I]] = [A | B], whose kernel lattice has basis
  // [[0, I], [T_B, W]].
  const IntMatrix& tb = t_b.basis();
  IntMatrix left(ma + mb, mb), right(ma + mb, ma);
  left << -r * tb, tb;
  right << IntMatrix::Identity(ma, ma) - r * w, w;
  // Either column order spans the same lattice; keep the one with the
  // smaller Gram-Schmidt norm.
  IntMatrix first(ma + mb, ma + mb), second(ma + mb, ma + mb);
  first << left, right;
  second << right, left;
  ShortBasis x(std::move(first)), y(std::move(second));
  return x.gram_schmidt_norm() <= y.gram_schmidt_norm() ? std::move(x) : std::move(y);
}

IntVector sample_right(const ModMatrix& a, const ModMatrix& b, const IntMatrix& r,
                       const ShortBasis& t_b, const ModMatrix& u, double s, RandomStream& rng) {
  ShortBasis t_f = right_basis(a, b, r, t_b);
  ModMatrix f = hcat(a, mat_mul(a, r) + b);
  IntVector d = coset_gaussian(f, t_f, u, s, rng);
  check_coset(f, d, u);
  return d;
}

}  // namespace blindlat
