// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace blindlat {

GaussParams::GaussParams(double s, double c, double t) : sigma(s), center(c), tail_cut(t) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ParameterError("GaussParams: sigma must be > 0");
  if (!(tail_cut >= 6)) throw ParameterError("GaussParams: tail_cut must be >= 6");
  if (!std::isfinite(center)) throw ParameterError("GaussParams: center must be finite");
}

double smoothing_factor(Index m, double delta) {
  return std::sqrt(std::log(2.0 * static_cast<double>(m) / delta) / std::numbers::pi);
}

IntegerGaussian::IntegerGaussian(const GaussParams& p)
    : p_(p),
      lo_(static_cast<std::int64_t>(std::ceil(p.center - p.tail_cut * p.sigma))),
      hi_(static_cast<std::int64_t>(std::floor(p.center + p.tail_cut * p.sigma))) {
  if (hi_ - lo_ + 1 > kMaxTable) return;
  const std::size_t n = static_cast<std::size_t>(hi_ - lo_ + 1);
  pmf_.resize(n);
  long double total = 0;
  const long double s2 = static_cast<long double>(p.sigma) * p.sigma;
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = static_cast<long double>(lo_ + static_cast<std::int64_t>(i)) - p.center;
    pmf_[i] = std::exp(-std::numbers::pi_v<long double> * d * d / s2);
    total += pmf_[i];
  }
  cdf_.resize(n);
  long double run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pmf_[i] /= total;
    run += pmf_[i];
    cdf_[i] = static_cast<double>(run);
  }
  cdf_.back() = 1.0;
}

std::int64_t IntegerGaussian::sample(RandomStream& rng) const {
  if (cdf_.empty()) return sample_z_rejection(p_.sigma, p_.center, p_.tail_cut, rng);
  const double u = rng.uniform_real();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return lo_ + static_cast<std::int64_t>(it - cdf_.begin());
}

double IntegerGaussian::probability(std::int64_t x) const {
  if (x < lo_ || x > hi_ || pmf_.empty()) return 0.0;
  return static_cast<double>(pmf_[static_cast<std::size_t>(x - lo_)]);
}

std::int64_t sample_z(const GaussParams& p, RandomStream& rng) { return IntegerGaussian(p).sample(rng); }

std::int64_t sample_z_rejection(double sigma, double center, double tail_cut, RandomStream& rng) {
  const auto lo = static_cast<std::int64_t>(std::ceil(center - tail_cut * sigma));
  const auto hi = static_cast<std::int64_t>(std::floor(center + tail_cut * sigma));
  if (hi < lo) {
    // Support narrower than one integer; the nearest integer carries all
    // of the truncated mass.
    return static_cast<std::int64_t>(std::llround(center));
  }
  for (;;) {
    const std::int64_t x = rng.uniform_int(lo, hi);
    if (rng.uniform_real() < gaussian_weight(static_cast<double>(x), sigma, center)) return x;
  }
}

ShortBasis::ShortBasis(IntMatrix basis) : b_(std::move(basis)) {
  if (b_.rows() != b_.cols() || b_.rows() == 0) throw SingularBasis("basis must be square and non-empty");
  Eigen::HouseholderQR<Matrix<double>> qr(b_.cast<double>());
  q_ = qr.householderQ();
  r_ = qr.matrixQR().triangularView<Eigen::Upper>();
  gs_norms_ = r_.diagonal().cwiseAbs();
  const double scale = max_column_norm(b_);
  for (Index i = 0; i < gs_norms_.size(); ++i) {
    if (gs_norms_(i) <= 1e-9 * scale) throw SingularBasis("basis is singular");
  }
  gs_ = gs_norms_.maxCoeff();
}

double gram_schmidt_norm(const IntMatrix& basis) { return ShortBasis(basis).gram_schmidt_norm(); }

namespace {

template <class Draw>
IntVector nearest_plane(const ShortBasis& basis, const Vector<double>& center, Draw&& draw) {
  const Index m = basis.dim();
  if (center.size() != m) throw DimensionError("lattice sampler: center dimension mismatch");
  const Matrix<double>& r = basis.r_factor();
  Vector<double> y = basis.q_factor().transpose() * center;
  IntVector v = IntVector::Zero(m);
  for (Index i = m - 1; i >= 0; --i) {
    const double rii = r(i, i);
    const std::int64_t z = draw(i, y(i) / rii, std::abs(rii));
    if (z == 0) continue;
    y.head(i + 1) -= static_cast<double>(z) * r.col(i).head(i + 1);
    v += z * basis.basis().col(i);
  }
  return v;
}

}  // namespace

IntVector sample_lattice_at(const ShortBasis& basis, const GaussParams& p,
                            const Vector<double>& center, RandomStream& rng) {
  const double need = basis.gram_schmidt_norm() * smoothing_factor(basis.dim());
  if (p.sigma < need) {
    throw WidthTooSmall("lattice sampler: sigma " + std::to_string(p.sigma) + " below " +
                        std::to_string(need));
  }
  return nearest_plane(basis, center, [&](Index, double c, double gs) {
    return sample_z_rejection(p.sigma / gs, c, p.tail_cut, rng);
  });
}

IntVector reduce_mod_basis(const ShortBasis& basis, IntVector t) {
  for (int pass = 0; pass < 16; ++pass) {
    IntVector v = nearest_plane(basis, t.cast<double>(), [](Index, double c, double) {
      return static_cast<std::int64_t>(std::llround(c));
    });
    if (v.isZero()) break;
    t -= v;
  }
  return t;
}

}  // namespace blindlat
