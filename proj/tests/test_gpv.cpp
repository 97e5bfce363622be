// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>

#include "blindlat/gpv.hpp"
#include "oracles.hpp"
#include "tiny_lattices.hpp"

namespace blindlat {
namespace {

Bytes msg(int i) {
  std::string s = "message-" + std::to_string(i);
  return Bytes(s.begin(), s.end());
}

class GpvToy : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    RandomStream rng = RandomStream::from_u64(50);
    keys_ = new GpvKeys(gpv_gen(GpvConfig{}, rng));
  }
  static void TearDownTestSuite() { delete keys_; }
  static GpvKeys* keys_;
};
GpvKeys* GpvToy::keys_ = nullptr;

TEST_F(GpvToy, Completeness) {
  const GpvPublicKey pk = keys_->public_key();
  for (int i = 0; i < 1000; ++i) {
    Bytes m = msg(i);
    ASSERT_TRUE(gpv_verify(pk, m, gpv_sign(*keys_, m))) << i;
  }
}

TEST_F(GpvToy, DeterministicAndDistinct) {
  Bytes m = msg(7);
  GpvSignature a = gpv_sign(*keys_, m), b = gpv_sign(*keys_, m);
  EXPECT_EQ(serialize(a), serialize(b));
  std::set<Bytes> seen;
  for (int i = 0; i < 200; ++i) {
    Bytes mi = msg(i);
    ASSERT_TRUE(seen.insert(serialize(gpv_sign(*keys_, mi))).second) << "signature collision at " << i;
    ASSERT_FALSE(gpv_hash(keys_->psf.params, mi) == gpv_hash(keys_->psf.params, msg(i + 1000)));
  }
}

TEST_F(GpvToy, PerturbationAndOversizeRejected) {
  const GpvPublicKey pk = keys_->public_key();
  Bytes m = msg(3);
  GpvSignature sig = gpv_sign(*keys_, m);
  for (Index i = 0; i < pk.params.m; ++i) {
    GpvSignature bad = sig;
    bad.sigma(i) += 1;
    // A (sigma + e_i) = H(m) exactly when column i of A is zero.
    const bool column_zero = pk.a.col(i).is_zero();
    EXPECT_EQ(gpv_verify(pk, m, bad), column_zero && bad.sigma.cast<double>().norm() <= pk.params.domain_radius());
  }
  GpvSignature big = sig;
  big.sigma(0) += static_cast<std::int64_t>(pk.params.q.value());
  EXPECT_TRUE(mat_mul(pk.a, big.sigma) == gpv_hash(pk.params, m));
  EXPECT_FALSE(gpv_verify(pk, m, big));
  GpvSignature short_sig{sig.sigma.head(pk.params.m - 1)};
  EXPECT_FALSE(gpv_verify(pk, m, short_sig));
  EXPECT_FALSE(gpv_verify(pk, msg(4), sig));
}

TEST_F(GpvToy, Serialization) {
  const GpvPublicKey pk = keys_->public_key();
  Bytes pkb = serialize(pk);
  GpvPublicKey pk2 = parse_gpv_public_key(pkb);
  EXPECT_EQ(pk2.a, pk.a);
  EXPECT_EQ(pk2.params, pk.params);
  Bytes skb = serialize(*keys_);
  GpvKeys k2 = parse_gpv_keys(skb);
  EXPECT_EQ(serialize(k2), skb);
  Bytes m = msg(1);
  EXPECT_EQ(serialize(gpv_sign(k2, m)), serialize(gpv_sign(*keys_, m)));
  GpvSignature sig = parse_gpv_signature(serialize(gpv_sign(*keys_, m)));
  EXPECT_TRUE(gpv_verify(pk2, m, sig));
  EXPECT_THROW(parse_gpv_signature(pkb), FormatError);
  Bytes bad = pkb;
  bad[1] ^= 1;
  EXPECT_THROW(parse_gpv_public_key(bad), FormatError);
  bad = pkb;
  bad[4] = 9;
  EXPECT_THROW(parse_gpv_public_key(bad), FormatError);
}

TEST(GpvHash, UniformAndReduced) {
  PsfParams p{2, 14, Modulus(5), 4.0};
  std::vector<double> counts(25, 0);
  for (int i = 0; i < 20000; ++i) {
    ModMatrix h = gpv_hash(p, msg(i));
    counts[h(0, 0) * 5 + h(1, 0)] += 1;
  }
  EXPECT_GT(oracle::chi2_gof(counts, std::vector<double>(25, 1.0 / 25)), 0.001);
  EXPECT_EQ(gpv_hash(p, msg(1)), gpv_hash(p, msg(1)));
}

TEST(Psf, ImageUniformity) {
  RandomStream rng = RandomStream::from_u64(51);
  Modulus q(5);
  PsfKeyPair kp = psf_gen(2, q, trap_gen_min_m(2, q), rng);
  std::vector<double> counts(25, 0);
  for (int i = 0; i < 100000; ++i) {
    ModMatrix y = psf_f(kp.pk, kp.params, psf_samp(kp.params, rng));
    counts[y(0, 0) * 5 + y(1, 0)] += 1;
  }
  EXPECT_GT(oracle::chi2_gof(counts, std::vector<double>(25, 1.0 / 25)), 0.001);
}

TEST(Psf, SampBasics) {
  PsfParams p{1, 8, Modulus(5), 3.0};
  RandomStream r1 = RandomStream::from_u64(52), r2 = RandomStream::from_u64(52);
  EXPECT_EQ(psf_samp(p, r1), psf_samp(p, r2));
  double sum = 0;
  for (int i = 0; i < 12500; ++i) {
    IntVector x = psf_samp(p, r1);
    ASSERT_LE(x.cast<double>().norm(), p.domain_radius());
    sum += static_cast<double>(x.sum());
  }
  EXPECT_LE(std::abs(sum / 100000), 0.05);
}

TEST(Psf, DomainAndRoundTrip) {
  PsfKeyPair kp{tiny::pre_a(), tiny::pre_basis(), PsfParams{1, 4, Modulus(5), tiny::kWidth}};
  EXPECT_TRUE(psf_f(kp.pk, kp.params, IntVector::Zero(4)).is_zero());
  EXPECT_THROW(psf_f(kp.pk, kp.params, IntVector::Zero(3)), ParameterError);
  EXPECT_THROW(psf_f(kp.pk, kp.params, IntVector::Constant(4, 100)), ParameterError);
  Bytes r = {1, 2, 3};
  for (std::int64_t y = 0; y < 5; ++y) {
    IntVector x = psf_invf(kp, tiny::target(y), r);
    EXPECT_EQ(psf_f(kp.pk, kp.params, x), tiny::target(y));
    EXPECT_EQ(psf_invf(kp, tiny::target(y), r), x);
  }
}

TEST(Psf, InversionMatchesFilteredSamp) {
  PsfKeyPair kp{tiny::pre_a(), tiny::pre_basis(), PsfParams{1, 4, Modulus(5), tiny::kWidth}};
  const double radius = kp.params.domain_radius();
  for (std::int64_t y : {0, 2}) {
    auto ref = oracle::enumerate_coset_gaussian(4, kp.params.s, radius, [&](const IntVector& x) {
      return ((x(0) + 2 * x(1) + 3 * x(2) + 4 * x(3) - y) % 5 + 5) % 5 == 0;
    });
    std::map<std::vector<std::int64_t>, double> h;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      ByteWriter w;
      w.u32(static_cast<std::uint32_t>(i));
      IntVector x = psf_invf(kp, tiny::target(y), w.bytes());
      h[std::vector<std::int64_t>(x.data(), x.data() + 4)] += 1;
    }
    EXPECT_LE(oracle::tv_distance(h, n, ref.prob), 0.05);
    // Min-entropy proxy.
    double top = 0;
    for (const auto& [k, p] : ref.prob) top = std::max(top, p);
    EXPECT_LT(top, 0.5);
    double emp_top = 0;
    for (const auto& [k, c] : h) emp_top = std::max(emp_top, c / n);
    EXPECT_LT(emp_top, 0.5);
  }
}

}  // namespace
}  // namespace blindlat
