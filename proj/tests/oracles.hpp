// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by tests. Nothing here calls
// into the library's arithmetic; the point is to recompute results by a
// different route.

#ifndef BLINDLAT_TESTS_ORACLES_HPP_
#define BLINDLAT_TESTS_ORACLES_HPP_

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "blindlat/modq.hpp"

namespace oracle {

using blindlat::Index;
using blindlat::IntMatrix;
using blindlat::IntVector;
using Rational = boost::multiprecision::cpp_rational;

// Schoolbook product, reducing after every single multiply-add.
inline std::vector<std::vector<std::uint64_t>> naive_mul(const blindlat::ModMatrix& a,
                                                         const blindlat::ModMatrix& b) {
  const std::uint64_t q = a.modulus().value();
  std::vector<std::vector<std::uint64_t>> out(a.rows(), std::vector<std::uint64_t>(b.cols(), 0));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (Index t = 0; t < a.cols(); ++t) {
        acc = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(a(i, t)) * b(t, j) + acc) % q);
      }
      out[i][j] = acc;
    }
  return out;
}

// Squared Gram-Schmidt norms in exact rational arithmetic. Throws on a
// singular input.
inline std::vector<Rational> exact_gs_norms2(const IntMatrix& b) {
  const Index n = b.cols(), d = b.rows();
  std::vector<std::vector<Rational>> gs;
  std::vector<Rational> norms;
  for (Index i = 0; i < n; ++i) {
    std::vector<Rational> v(d);
    for (Index r = 0; r < d; ++r) v[r] = Rational(b(r, i));
    for (Index j = 0; j < i; ++j) {
      Rational dot = 0;
      for (Index r = 0; r < d; ++r) dot += Rational(b(r, i)) * gs[j][r];
      Rational mu = dot / norms[j];
      for (Index r = 0; r < d; ++r) v[r] -= mu * gs[j][r];
    }
    Rational nn = 0;
    for (Index r = 0; r < d; ++r) nn += v[r] * v[r];
    if (nn == 0) throw std::invalid_argument("singular basis");
    gs.push_back(std::move(v));
    norms.push_back(nn);
  }
  return norms;
}

inline Rational exact_gs_max2(const IntMatrix& b) {
  auto n = exact_gs_norms2(b);
  return *std::max_element(n.begin(), n.end());
}

// Exact integer determinant by fraction-free elimination (Bareiss).
inline boost::multiprecision::cpp_int determinant(const IntMatrix& m) {
  using boost::multiprecision::cpp_int;
  const Index n = m.rows();
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a[i][j] = m(i, j);
  cpp_int prev = 1;
  int sign = 1;
  for (Index k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      Index p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i)
      for (Index j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Upper-tail p-value of a chi-square statistic.
inline double chi2_pvalue(double stat, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Goodness of fit of observed counts against expected probabilities.
inline double chi2_gof(const std::vector<double>& counts, const std::vector<double>& probs) {
  double n = 0;
  for (double c : counts) n += c;
  double stat = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi2_pvalue(stat, static_cast<double>(counts.size() - 1));
}

// Two-sample chi-square homogeneity test on equal-length histograms; bins
// that are empty in both samples are dropped.
inline double chi2_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  double na = 0, nb = 0;
  for (double x : a) na += x;
  for (double x : b) nb += x;
  double stat = 0;
  int bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] + b[i];
    if (t == 0) continue;
    ++bins;
    const double ea = t * na / (na + nb), eb = t * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  return chi2_pvalue(stat, bins - 1);
}

// All x in Z^dim with |x_i| <= radius that satisfy pred, with their
// ideal weights rho_s(x).
struct Enumerated {
  std::map<std::vector<std::int64_t>, double> prob;
};

inline Enumerated enumerate_coset_gaussian(Index dim, double s, double radius,
                                           const std::function<bool(const IntVector&)>& member) {
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  Enumerated out;
  IntVector x = IntVector::Constant(dim, -r);
  double total = 0;
  for (;;) {
    const double n2 = static_cast<double>(x.squaredNorm());
    if (n2 <= radius * radius && member(x)) {
      const double w = std::exp(-M_PI * n2 / (s * s));
      out.prob[std::vector<std::int64_t>(x.data(), x.data() + dim)] = w;
      total += w;
    }
    Index i = 0;
    while (i < dim && x(i) == r) x(i++) = -r;
    if (i == dim) break;
    ++x(i);
  }
  for (auto& [k, v] : out.prob) v /= total;
  return out;
}

// Total variation between an empirical histogram and a reference law.
inline double tv_distance(const std::map<std::vector<std::int64_t>, double>& counts, double n,
                          const std::map<std::vector<std::int64_t>, double>& ref) {
  double tv = 0;
  for (const auto& [k, p] : ref) {
    auto it = counts.find(k);
    tv += std::abs((it == counts.end() ? 0.0 : it->second / n) - p);
  }
  for (const auto& [k, c] : counts) {
    if (!ref.count(k)) tv += c / n;
  }
  return tv / 2;
}

inline double tv_two_sample(const std::map<std::vector<std::int64_t>, double>& a, double na,
                            const std::map<std::vector<std::int64_t>, double>& b, double nb) {
  double tv = 0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    tv += std::abs(c / na - (it == b.end() ? 0.0 : it->second / nb));
  }
  for (const auto& [k, c] : b) {
    if (!a.count(k)) tv += c / nb;
  }
  return tv / 2;
}

}  // namespace oracle

#endif  // BLINDLAT_TESTS_ORACLES_HPP_
