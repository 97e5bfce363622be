// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "blindlat/gauss.hpp"
#include "oracles.hpp"

namespace blindlat {
namespace {

TEST(GaussParams, Validation) {
  EXPECT_THROW(GaussParams(0.0), ParameterError);
  EXPECT_THROW(GaussParams(-1.0), ParameterError);
  EXPECT_THROW(GaussParams(1.0, 0.0, 5.9), ParameterError);
  EXPECT_NO_THROW(GaussParams(1.0, 0.5, 6.0));
}

TEST(SampleZ, MeanNearCenter) {
  RandomStream rng = RandomStream::from_u64(11);
  IntegerGaussian z{GaussParams(2.0)};
  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += static_cast<double>(z.sample(rng));
  EXPECT_LE(std::abs(sum / 100000), 0.05);
}

TEST(SampleZ, TableIsSymmetric) {
  IntegerGaussian z{GaussParams(2.0)};
  ASSERT_TRUE(z.tabulated());
  EXPECT_EQ(z.lo(), -z.hi());
  for (std::int64_t x = 0; x <= z.hi(); ++x) EXPECT_EQ(z.probability(x), z.probability(-x));
}

TEST(SampleZ, RatioOfZeroToOne) {
  RandomStream rng = RandomStream::from_u64(12);
  const double sigma = 1.5;
  IntegerGaussian z{GaussParams(sigma)};
  double c0 = 0, c1 = 0;
  for (int i = 0; i < 1000000; ++i) {
    std::int64_t x = z.sample(rng);
    c0 += x == 0;
    c1 += x == 1;
  }
  const double want = 1.0 / std::exp(-M_PI / (sigma * sigma));
  EXPECT_NEAR(c0 / c1, want, 0.05 * want);
}

TEST(SampleZ, TruncatedMassSumsToOne) {
  for (double sigma : {0.7, 1.5, 3.0, 40.0}) {
    for (double c : {0.0, 0.3, -2.75}) {
      IntegerGaussian z{GaussParams(sigma, c)};
      double total = 0;
      for (std::int64_t x = z.lo() - 2; x <= z.hi() + 2; ++x) total += z.probability(x);
      EXPECT_NEAR(total, 1.0, 1e-12);
      // Table entries follow rho directly.
      const double r = z.probability(z.lo() + 1) / z.probability(z.lo());
      const double want = gaussian_weight(static_cast<double>(z.lo() + 1), sigma, c) /
                          gaussian_weight(static_cast<double>(z.lo()), sigma, c);
      EXPECT_NEAR(r / want, 1.0, 1e-9);
    }
  }
}

TEST(SampleZ, SupportRespectsTailCut) {
  RandomStream rng = RandomStream::from_u64(13);
  GaussParams p(0.8, 0.4, 6.0);
  for (int i = 0; i < 20000; ++i) {
    std::int64_t x = sample_z(p, rng);
    ASSERT_LE(std::abs(static_cast<double>(x) - 0.4), 6.0 * 0.8);
  }
}

TEST(SampleZ, RejectionAgreesWithTable) {
  RandomStream rng = RandomStream::from_u64(14);
  IntegerGaussian z{GaussParams(1.7, 0.25)};
  std::map<std::int64_t, double> counts;
  const int n = 200000;
  for (int i = 0; i < n; ++i) counts[sample_z_rejection(1.7, 0.25, 12.0, rng)] += 1;
  double tv = 0;
  for (std::int64_t x = z.lo(); x <= z.hi(); ++x) tv += std::abs(counts[x] / n - z.probability(x));
  EXPECT_LE(tv / 2, 0.01);
}

TEST(SampleZ, WideWidthFallsBackToRejection) {
  IntegerGaussian z{GaussParams(1e6)};
  EXPECT_FALSE(z.tabulated());
  RandomStream rng = RandomStream::from_u64(15);
  double s2 = 0;
  for (int i = 0; i < 20000; ++i) {
    double x = static_cast<double>(z.sample(rng));
    s2 += x * x;
  }
  // Variance of D_{Z,s} is close to s^2 / (2 pi).
  EXPECT_NEAR(std::sqrt(s2 / 20000), 1e6 / std::sqrt(2 * M_PI), 0.03 * 1e6 / std::sqrt(2 * M_PI));
}

TEST(GramSchmidt, SimpleCases) {
  EXPECT_NEAR(gram_schmidt_norm(IntMatrix::Identity(4, 4)), 1.0, 1e-12);
  IntMatrix b(2, 2);
  b << 2, 1, 0, 2;
  EXPECT_NEAR(gram_schmidt_norm(b), 2.0, 1e-12);
  IntMatrix s(2, 2);
  s << 1, 2, 2, 4;
  EXPECT_THROW(gram_schmidt_norm(s), SingularBasis);
  EXPECT_THROW(ShortBasis(IntMatrix(2, 3)), SingularBasis);
}

TEST(GramSchmidt, UnimodularMatchesExactOracle) {
  RandomStream rng = RandomStream::from_u64(16);
  for (int t = 0; t < 50; ++t) {
    // Product of random elementary operations keeps determinant +-1.
    IntMatrix u = IntMatrix::Identity(4, 4);
    for (int k = 0; k < 8; ++k) {
      Index i = static_cast<Index>(rng.uniform(4)), j = static_cast<Index>(rng.uniform(4));
      if (i == j) continue;
      u.col(i) += rng.uniform_int(-2, 2) * u.col(j);
    }
    ASSERT_EQ(abs(oracle::determinant(u)), 1);
    const double exact = std::sqrt(static_cast<double>(oracle::exact_gs_max2(u)));
    EXPECT_NEAR(gram_schmidt_norm(u), exact, 1e-6);
  }
}

TEST(LatticeSampler, IdentityBasisMatchesProductOracle) {
  RandomStream rng = RandomStream::from_u64(17);
  ShortBasis z2(IntMatrix::Identity(2, 2));
  const double sigma = 3.0;
  IntegerGaussian one{GaussParams(sigma)};
  std::map<std::vector<std::int64_t>, double> counts, ref;
  for (std::int64_t x = one.lo(); x <= one.hi(); ++x)
    for (std::int64_t y = one.lo(); y <= one.hi(); ++y) ref[{x, y}] = one.probability(x) * one.probability(y);
  const int n = 100000;
  Vector<double> c = Vector<double>::Zero(2);
  for (int i = 0; i < n; ++i) {
    IntVector v = sample_lattice(z2, GaussParams(sigma), c, rng);
    counts[{v(0), v(1)}] += 1;
  }
  EXPECT_LE(oracle::tv_distance(counts, n, ref), 0.02);
}

TEST(LatticeSampler, Deterministic) {
  IntMatrix b(2, 2);
  b << 3, 1, 1, 2;
  ShortBasis basis(b);
  Vector<double> c(2);
  c << 0.5, -1.25;
  RandomStream r1 = RandomStream::from_u64(18), r2 = RandomStream::from_u64(18);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(sample_lattice(basis, GaussParams(10.0), c, r1), sample_lattice(basis, GaussParams(10.0), c, r2));
  }
}

TEST(LatticeSampler, EvenLatticeMembership) {
  ShortBasis basis(IntMatrix(2 * IntMatrix::Identity(2, 2)));
  RandomStream rng = RandomStream::from_u64(19);
  Vector<double> c(2);
  c << 0.3, 1.7;
  for (int i = 0; i < 2000; ++i) {
    IntVector v = sample_lattice(basis, GaussParams(8.0), c, rng);
    ASSERT_EQ(v(0) % 2, 0);
    ASSERT_EQ(v(1) % 2, 0);
  }
}

TEST(LatticeSampler, WidthTooSmall) {
  ShortBasis basis(IntMatrix(2 * IntMatrix::Identity(2, 2)));
  RandomStream rng = RandomStream::from_u64(20);
  const double need = 2.0 * smoothing_factor(2);
  EXPECT_THROW(sample_lattice(basis, GaussParams(need * 0.99), Vector<double>::Zero(2), rng), WidthTooSmall);
  EXPECT_NO_THROW(sample_lattice(basis, GaussParams(need), Vector<double>::Zero(2), rng));
}

TEST(LatticeSampler, Concentration) {
  RandomStream rng = RandomStream::from_u64(21);
  IntMatrix b(3, 3);
  b << 2, 1, 0, 0, 3, 1, 1, 0, 2;
  ShortBasis basis(b);
  const double sigma = basis.gram_schmidt_norm() * smoothing_factor(3);
  Vector<double> c(3);
  c << 10.5, -3.25, 7.0;
  int within = 0;
  for (int i = 0; i < 5000; ++i) {
    IntVector v = sample_lattice(basis, GaussParams(sigma), c, rng);
    within += (v.cast<double>() - c).norm() <= sigma * std::sqrt(3.0);
  }
  EXPECT_GE(within, 0.99 * 5000);
}

TEST(ReduceModBasis, StaysInCosetAndShrinks) {
  IntMatrix b(2, 2);
  b << 5, 1, 0, 3;
  ShortBasis basis(b);
  IntVector t(2);
  t << 1000003, -777777;
  IntVector r = reduce_mod_basis(basis, t);
  // t - r must be an integer combination of the basis columns.
  Eigen::Vector2d coeff = b.cast<double>().fullPivLu().solve((t - r).cast<double>());
  EXPECT_NEAR(coeff(0), std::round(coeff(0)), 1e-9);
  EXPECT_NEAR(coeff(1), std::round(coeff(1)), 1e-9);
  EXPECT_LE(r.cast<double>().norm(), 6.0);
}

}  // namespace
}  // namespace blindlat
