// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "blindlat/trapdoor.hpp"
#include "oracles.hpp"
#include "tiny_lattices.hpp"

namespace blindlat {
namespace {

using Histogram = std::map<std::vector<std::int64_t>, double>;

void bump(Histogram& h, const IntVector& v) { h[std::vector<std::int64_t>(v.data(), v.data() + v.size())] += 1; }

TEST(TrapGen, KernelIdentityAndBound) {
  RandomStream rng = RandomStream::from_u64(30);
  for (auto [n, qv] : {std::pair<Index, std::uint64_t>{1, 5}, {2, 5}, {2, 13}, {3, 257}, {2, 1125899906842679ULL}}) {
    Modulus q(qv);
    const Index m = trap_gen_min_m(n, q);
    TrapdoorKeyPair kp = trap_gen(n, q, m, rng);
    EXPECT_EQ(kp.a.rows(), n);
    EXPECT_EQ(kp.a.cols(), m);
    EXPECT_TRUE(mat_mul(kp.a, kp.t_a.basis()).is_zero());
    EXPECT_EQ(rank(kp.a), n);
    const double ratio = kp.t_a.gram_schmidt_norm() / std::sqrt(n * std::log2(static_cast<double>(qv)));
    EXPECT_LE(ratio, kTrapGenConstant);
  }
}

TEST(TrapGen, BasisHasKernelIndex) {
  RandomStream rng = RandomStream::from_u64(31);
  Modulus q(5);
  TrapdoorKeyPair kp = trap_gen(2, q, trap_gen_min_m(2, q), rng);
  // The kernel lattice of a full-rank n x m matrix has index q^n.
  EXPECT_EQ(abs(oracle::determinant(kp.t_a.basis())), 25);
}

TEST(TrapGen, MinimumM) {
  RandomStream rng = RandomStream::from_u64(32);
  Modulus q(5);
  EXPECT_EQ(trap_gen_min_m(2, q), 14);
  EXPECT_THROW(trap_gen(2, q, 13, rng), ParameterError);
}

TEST(TrapGen, Deterministic) {
  Modulus q(13);
  RandomStream r1 = RandomStream::from_u64(33), r2 = RandomStream::from_u64(33);
  TrapdoorKeyPair k1 = trap_gen(2, q, 20, r1), k2 = trap_gen(2, q, 20, r2);
  EXPECT_EQ(k1.a, k2.a);
  EXPECT_EQ(k1.t_a.basis(), k2.t_a.basis());
}

TEST(TrapGen, EntryUniformity) {
  Modulus q(5);
  RandomStream rng = RandomStream::from_u64(34);
  const Index m = trap_gen_min_m(2, q);
  // A fixed (row 1, last column) entry lies in the A*R + G block.
  std::vector<double> joint(25, 0), left(5, 0);
  for (int t = 0; t < 10000; ++t) {
    TrapdoorKeyPair kp = trap_gen(2, q, m, rng);
    joint[kp.a(1, m - 1) * 5 + kp.a(0, m - 1)] += 1;
    left[kp.a(0, 0)] += 1;
  }
  EXPECT_GT(oracle::chi2_gof(joint, std::vector<double>(25, 1.0 / 25)), 0.001);
  EXPECT_GT(oracle::chi2_gof(left, std::vector<double>(5, 0.2)), 0.001);
}

TEST(GadgetBasis, KernelNormAndIndex) {
  for (std::uint64_t qv : {5ULL, 7ULL, 13ULL, 257ULL, 1125899906842679ULL}) {
    Modulus q(qv);
    for (Index n : {1, 3}) {
      ShortBasis t = gadget_basis(n, q);
      EXPECT_TRUE(mat_mul(gadget(n, q), t.basis()).is_zero());
      EXPECT_LE(oracle::exact_gs_max2(t.basis()), 5);
      EXPECT_LE(t.gram_schmidt_norm(), std::sqrt(5.0) + 1e-12);
    }
  }
  EXPECT_EQ(abs(oracle::determinant(gadget_basis(1, Modulus(7)).basis())), 7);
  ShortBasis padded = padded_gadget_basis(2, Modulus(7), 9);
  EXPECT_TRUE(mat_mul(padded_gadget(2, Modulus(7), 9), padded.basis()).is_zero());
  EXPECT_EQ(abs(oracle::determinant(padded.basis())), 49);
}

TEST(SamplePre, CosetMembershipOnTrapGenKeys) {
  RandomStream rng = RandomStream::from_u64(35);
  for (std::uint64_t qv : {13ULL, 1125899906842679ULL}) {
    Modulus q(qv);
    const Index n = 2, m = trap_gen_min_m(n, q);
    TrapdoorKeyPair kp = trap_gen(n, q, m, rng);
    const double s = kp.t_a.gram_schmidt_norm() * smoothing_factor(m);
    int within = 0;
    for (int t = 0; t < 200; ++t) {
      ModMatrix u = ModMatrix::uniform(n, 1, q, rng);
      IntVector x = sample_pre(kp, u, s, rng);
      ASSERT_EQ(mat_mul(kp.a, x), u);
      within += x.cast<double>().norm() <= s * std::sqrt(static_cast<double>(m));
    }
    EXPECT_GE(within, 198);
  }
}

TEST(SamplePre, WidthTooSmall) {
  RandomStream rng = RandomStream::from_u64(36);
  EXPECT_THROW(sample_pre(tiny::pre_a(), tiny::pre_basis(), tiny::target(1), 1.0, rng), WidthTooSmall);
}

TEST(SamplePre, SymmetricAtZeroTarget) {
  RandomStream rng = RandomStream::from_u64(37);
  Histogram h;
  const int n = 40000;
  for (int i = 0; i < n; ++i) bump(h, sample_pre(tiny::pre_a(), tiny::pre_basis(), tiny::target(0), tiny::kWidth, rng));
  Histogram mirrored;
  for (const auto& [k, c] : h) {
    std::vector<std::int64_t> neg(k);
    for (auto& x : neg) x = -x;
    mirrored[neg] = c;
  }
  EXPECT_LE(oracle::tv_two_sample(h, n, mirrored, n), 0.08);
}

TEST(SamplePre, MatchesEnumeratedCosetGaussian) {
  RandomStream rng = RandomStream::from_u64(38);
  ModMatrix a = tiny::pre_a();
  ShortBasis t = tiny::pre_basis();
  ModMatrix u = tiny::target(1);
  auto ref = oracle::enumerate_coset_gaussian(4, tiny::kWidth, 6 * tiny::kWidth, [&](const IntVector& x) {
    return (x(0) + 2 * x(1) + 3 * x(2) + 4 * x(3) - 1) % 5 == 0;
  });
  Histogram h;
  const int n = 100000;
  for (int i = 0; i < n; ++i) bump(h, sample_pre(a, t, u, tiny::kWidth, rng));
  EXPECT_LE(oracle::tv_distance(h, n, ref.prob), 0.05);
}

class LeftRight : public ::testing::Test {
 protected:
  ModMatrix a = tiny::half_a(), b = tiny::half_b();
  IntMatrix r = tiny::right_r();
  ModMatrix f = hcat(a, mat_mul(a, r) + b);
  ModMatrix u = tiny::target(3);
  oracle::Enumerated ref = oracle::enumerate_coset_gaussian(
      4, tiny::kWidth, 6 * tiny::kWidth, [this](const IntVector& x) { return mat_mul(f, x) == u; });
};

TEST_F(LeftRight, LeftMatchesEnumeration) {
  RandomStream rng = RandomStream::from_u64(39);
  // sample_left over F = [A | B'] with B' = A R + B.
  ModMatrix bp = mat_mul(a, r) + b;
  Histogram h;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    IntVector d = sample_left(a, bp, tiny::half_basis(), u, tiny::kWidth, rng);
    bump(h, d);
  }
  EXPECT_LE(oracle::tv_distance(h, n, ref.prob), 0.05);
}

TEST_F(LeftRight, RightMatchesEnumerationAndLeft) {
  RandomStream rng = RandomStream::from_u64(40);
  ModMatrix bp = mat_mul(a, r) + b;
  Histogram hl, hr;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    bump(hr, sample_right(a, b, r, tiny::half_basis(), u, tiny::kWidth, rng));
    bump(hl, sample_left(a, bp, tiny::half_basis(), u, tiny::kWidth, rng));
  }
  EXPECT_LE(oracle::tv_distance(hr, n, ref.prob), 0.05);
  EXPECT_LE(oracle::tv_two_sample(hl, n, hr, n), 0.08);
}

TEST(SampleLeft, EmptyRightBlockReducesToSamplePre) {
  ModMatrix a = tiny::pre_a();
  ModMatrix empty(1, 0, Modulus(5));
  RandomStream r1 = RandomStream::from_u64(41), r2 = RandomStream::from_u64(41);
  for (int i = 0; i < 100; ++i) {
    IntVector d = sample_left(a, empty, tiny::pre_basis(), tiny::target(2), tiny::kWidth, r1);
    IntVector x = sample_pre(a, tiny::pre_basis(), tiny::target(2), tiny::kWidth, r2);
    ASSERT_EQ(d, x);
  }
}

TEST(SampleLeft, LargeInstanceCoset) {
  RandomStream rng = RandomStream::from_u64(42);
  Modulus q(1125899906842679ULL);
  const Index n = 2, m = trap_gen_min_m(n, q);
  TrapdoorKeyPair kp = trap_gen(n, q, m, rng);
  ModMatrix b = ModMatrix::uniform(n, m, q, rng);
  const double s = kp.t_a.gram_schmidt_norm() * smoothing_factor(2 * m);
  for (int t = 0; t < 20; ++t) {
    ModMatrix u = ModMatrix::uniform(n, 1, q, rng);
    IntVector d = sample_left(kp.a, b, kp.t_a, u, s, rng);
    ASSERT_EQ(mat_mul(hcat(kp.a, b), d), u);
    EXPECT_LE(d.cast<double>().norm(), s * std::sqrt(2.0 * m));
  }
  EXPECT_THROW(sample_left(kp.a, b, kp.t_a, ModMatrix(n, 1, q), 0.5 * s, rng), WidthTooSmall);
}

TEST(SampleRight, GadgetInstanceCoset) {
  RandomStream rng = RandomStream::from_u64(43);
  Modulus q(1125899906842679ULL);
  const Index n = 2, m = 120;
  ModMatrix a = ModMatrix::uniform(n, m, q, rng);
  const Index w = n * q.bits();
  IntMatrix r(m, w);
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = rng.bit() ? 1 : -1;
  ShortBasis tg = gadget_basis(n, q);
  ShortBasis tf = right_basis(a, gadget(n, q), r, tg);
  // The extended basis keeps |T~_F| <= |T~_G| * sqrt(1 + |R|_2^2).
  EXPECT_LE(tf.gram_schmidt_norm(), std::sqrt(5.0) * std::sqrt(1 + std::pow(operator_norm(r), 2)) + 1e-6);
  const double s = tf.gram_schmidt_norm() * smoothing_factor(m + w);
  ModMatrix f = hcat(a, mat_mul(a, r) + gadget(n, q));
  for (int t = 0; t < 20; ++t) {
    ModMatrix u = ModMatrix::uniform(n, 1, q, rng);
    IntVector d = sample_right(a, gadget(n, q), r, tg, u, s, rng);
    ASSERT_EQ(mat_mul(f, d), u);
    EXPECT_LE(d.cast<double>().norm(), s * std::sqrt(static_cast<double>(m + w)));
  }
  EXPECT_THROW(sample_right(a, gadget(n, q), r, tg, ModMatrix(n, 1, q), 0.5 * s, rng), WidthTooSmall);
}

}  // namespace
}  // namespace blindlat
