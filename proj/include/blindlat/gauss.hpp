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

// Discrete Gaussians over Z and over lattices given a short basis.

#ifndef BLINDLAT_GAUSS_HPP_
#define BLINDLAT_GAUSS_HPP_

#include <cstdint>
#include <vector>

#include "blindlat/modq.hpp"
#include "blindlat/random.hpp"

namespace blindlat {

// Raised when a sampler is asked for a width below its validity bound.
class WidthTooSmall : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularBasis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GaussParams {
  double sigma;
  double center = 0.0;
  double tail_cut = 12.0;

  GaussParams(double sigma, double center = 0.0, double tail_cut = 12.0);
};

// rho_{sigma,c}(x) = exp(-pi (x - c)^2 / sigma^2).
inline double gaussian_weight(double x, double sigma, double center) {
  const double d = (x - center) / sigma;
  return std::exp(-3.14159265358979323846 * d * d);
}

// omega(sqrt(log m)) instantiated as sqrt(ln(2m / delta) / pi).
double smoothing_factor(Index m, double delta = 0.01);

// D_{Z,sigma,c} truncated to [c - t*sigma, c + t*sigma]. Sampling inverts a
// cumulative table; supports wider than kMaxTable points fall back to
// rejection sampling from the uniform distribution on the same support.
class IntegerGaussian {
 public:
  static constexpr std::int64_t kMaxTable = std::int64_t{1} << 20;

  explicit IntegerGaussian(const GaussParams& p);

  std::int64_t sample(RandomStream& rng) const;
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  bool tabulated() const { return !cdf_.empty(); }
  // Normalized table probability; zero outside the support. Only
  // meaningful when tabulated().
  double probability(std::int64_t x) const;

 private:
  GaussParams p_;
  std::int64_t lo_, hi_;
  std::vector<long double> pmf_;
  std::vector<double> cdf_;
};

std::int64_t sample_z(const GaussParams& p, RandomStream& rng);
// Rejection sampler; used per coordinate inside the lattice sampler where
// every draw has its own center.
std::int64_t sample_z_rejection(double sigma, double center, double tail_cut, RandomStream& rng);

// Nonsingular square integer basis (columns are basis vectors) with its
// QR factorization cached for nearest-plane sampling. |R_ii| is the norm
// of the i-th Gram-Schmidt vector.
class ShortBasis {
 public:
  explicit ShortBasis(IntMatrix basis);

  const IntMatrix& basis() const { return b_; }
  Index dim() const { return b_.cols(); }
  double gram_schmidt_norm() const { return gs_; }
  const Vector<double>& gs_norms() const { return gs_norms_; }
  const Matrix<double>& q_factor() const { return q_; }
  const Matrix<double>& r_factor() const { return r_; }

 private:
  IntMatrix b_;
  Matrix<double> q_, r_;
  Vector<double> gs_norms_;
  double gs_;
};

// max_i |b~_i|. Throws SingularBasis.
double gram_schmidt_norm(const IntMatrix& basis);

IntVector sample_lattice_at(const ShortBasis& basis, const GaussParams& p,
                            const Vector<double>& center, RandomStream& rng);

// Klein nearest-plane sampler for D_{L(B), sigma, center}. Throws
// WidthTooSmall unless sigma >= |B~| * smoothing_factor(dim). p.center is
// ignored in favour of the vector center, which may have any scalar type.
template <class Derived>
IntVector sample_lattice(const ShortBasis& basis, const GaussParams& p,
                         const Eigen::MatrixBase<Derived>& center, RandomStream& rng) {
  return sample_lattice_at(basis, p, center.template cast<double>(), rng);
}

// t minus a nearby lattice vector (iterated nearest plane). Stays in the
// coset t + L(B) exactly.
IntVector reduce_mod_basis(const ShortBasis& basis, IntVector t);

}  // namespace blindlat

#endif  // BLINDLAT_GAUSS_HPP_
