// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "blindlat/plainsig.hpp"
#include "blindlat/trapdoor.hpp"
#include "oracles.hpp"

namespace blindlat {
namespace {

std::vector<std::uint8_t> bits_of(std::uint64_t v, Index len) {
  std::vector<std::uint8_t> x(static_cast<std::size_t>(len));
  for (Index i = 0; i < len; ++i) x[i] = (v >> i) & 1;
  return x;
}

// Sixteen equal-width buckets over [0, q).
void bucket_entries(const ModMatrix& m, std::vector<double>& hist) {
  const double q = static_cast<double>(m.modulus().value());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) hist[static_cast<std::size_t>(static_cast<double>(m(i, j)) * 16 / q)] += 1;
}

void bucket_key(const PlainVerificationKey& vk, std::vector<double>& hist) {
  bucket_entries(vk.a_prime, hist);
  for (const auto& b : vk.b) bucket_entries(b, hist);
  bucket_entries(vk.c0, hist);
  bucket_entries(vk.c1, hist);
}

class Plain : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    params_ = new PlainParams(plain_params_for(2, 8, Epsilon(3, 4)));
    RandomStream rng = RandomStream::from_u64(60);
    keys_ = new PlainKeyPair(plain_gen(*params_, rng));
    challenge_ = new TrapdoorKeyPair(trap_gen(params_->n, Modulus(params_->q), params_->m, rng));
    reduction_ = new ReductionSetup(reduction_gen(*params_, Epsilon(3, 4), challenge_->a, rng));
  }
  static void TearDownTestSuite() {
    delete reduction_;
    delete challenge_;
    delete keys_;
    delete params_;
  }
  static PlainParams* params_;
  static PlainKeyPair* keys_;
  static TrapdoorKeyPair* challenge_;
  static ReductionSetup* reduction_;
};
PlainParams* Plain::params_ = nullptr;
PlainKeyPair* Plain::keys_ = nullptr;
TrapdoorKeyPair* Plain::challenge_ = nullptr;
ReductionSetup* Plain::reduction_ = nullptr;

TEST(PlainParamsTest, ConstraintEcho) {
  PlainParams p = plain_params(2, 8, 32, 5);
  EXPECT_EQ(p.sigsize, p.s * std::sqrt(2.0 * static_cast<double>(p.m)));
  EXPECT_TRUE(is_prime(p.q));
  EXPECT_GT(static_cast<double>(p.q), p.beta * std::sqrt(2.0 * std::log2(2.0)));
  EXPECT_GE(p.m, 2 * p.n * static_cast<Index>(std::ceil(std::log2(static_cast<double>(p.q)))));
  EXPECT_GE(p.beta, p.sigsize * (1 + p.r_bound));
  EXPECT_GE(p.m, p.n * Modulus(p.q).bits());
  EXPECT_FALSE(p.report.empty());
  // q is the smallest prime above the target for the final m.
  const double need = p.beta * std::sqrt(2.0);
  EXPECT_LE(static_cast<double>(next_prime(static_cast<std::uint64_t>(std::ceil(need)) + 1)),
            static_cast<double>(p.q));
}

TEST(PlainParamsTest, FourToTheDepthLaw) {
  for (int d = 1; d <= 4; ++d) {
    PlainParams a = plain_params(2, 8, 32, d), b = plain_params(2, 8, 32, d + 2);
    EXPECT_GE(b.s / a.s, 16.0) << d;
  }
}

TEST(PlainParamsTest, OverflowAndValidation) {
  EXPECT_THROW(plain_params(2, 8, 32, 12), ParameterError);
  EXPECT_THROW(plain_params(1, 8, 32, 3), ParameterError);
  EXPECT_THROW(plain_params(2, 0, 32, 3), ParameterError);
  PlainConstants bad;
  bad.kappa = 0;
  EXPECT_THROW(plain_params(2, 8, 32, 3, bad), ParameterError);
}

TEST_F(Plain, KeyShapes) {
  const auto& vk = keys_->vk;
  EXPECT_TRUE(mat_mul(vk.a, keys_->sk.t_a.basis()).is_zero());
  EXPECT_EQ(static_cast<Index>(vk.b.size()), params_->k);
  for (const ModMatrix* x : {&vk.a, &vk.a_prime, &vk.c0, &vk.c1}) {
    EXPECT_EQ(x->rows(), params_->n);
    EXPECT_EQ(x->cols(), params_->m);
  }
  for (const auto& b : vk.b) EXPECT_EQ(b.cols(), params_->m);
  EXPECT_EQ(vk.circuit, prf_circuit(Epsilon(3, 4), 8));
}

TEST_F(Plain, UniformKeyEntries) {
  std::vector<double> hist(16, 0);
  bucket_key(keys_->vk, hist);
  EXPECT_GT(oracle::chi2_gof(hist, std::vector<double>(16, 1.0 / 16)), 0.001);
}

TEST_F(Plain, Completeness) {
  RandomStream rng = RandomStream::from_u64(61);
  int within = 0;
  for (int i = 0; i < 100; ++i) {
    auto msg = bits_of(rng.uniform(256), 8);
    IntVector sig = plain_sign(keys_->sk, keys_->vk, msg, rng);
    ASSERT_EQ(sig.size(), 2 * params_->m);
    ASSERT_TRUE(mat_mul(keys_->vk.f_matrix(msg), sig).is_zero());
    within += sig.cast<double>().norm() <= params_->sigsize;
    ASSERT_TRUE(plain_verify(keys_->vk, msg, sig)) << i;
  }
  EXPECT_GE(within, 99);
}

TEST_F(Plain, VerifyRejections) {
  RandomStream rng = RandomStream::from_u64(62);
  const auto& vk = keys_->vk;
  auto msg = bits_of(0x5a, 8);
  IntVector sig = plain_sign(keys_->sk, vk, msg, rng);
  EXPECT_FALSE(plain_verify(vk, msg, IntVector::Zero(2 * params_->m)));
  EXPECT_FALSE(plain_verify(vk, msg, sig.head(params_->m)));
  EXPECT_FALSE(plain_verify(vk, bits_of(0x5a, 7), sig));
  // Long kernel vector: the signature plus a large multiple of a trapdoor
  // column (padded with zeros) stays in the lattice.
  IntVector longv = sig;
  longv.head(params_->m) += keys_->sk.t_a.basis().col(0) * static_cast<std::int64_t>(params_->sigsize);
  ASSERT_TRUE(mat_mul(vk.f_matrix(msg), longv).is_zero());
  EXPECT_FALSE(plain_verify(vk, msg, longv));
  // Other messages.
  int accepted = 0;
  for (std::uint64_t v = 0; v < 256; v += 17) {
    if (v == 0x5a) continue;
    accepted += plain_verify(vk, bits_of(v, 8), sig);
  }
  EXPECT_EQ(accepted, 0);
  IntVector bumped = sig;
  bumped(3) += 1;
  EXPECT_FALSE(plain_verify(vk, msg, bumped));
}

TEST_F(Plain, RelatedMessageGuard) {
  // Every pair of the 256 messages, which covers any sample of pairs.
  std::set<std::vector<std::uint64_t>> seen;
  for (std::uint64_t v = 0; v < 256; ++v) {
    ModMatrix a = keys_->vk.prf_matrix(bits_of(v, 8));
    std::vector<std::uint64_t> flat(a.residues().data(), a.residues().data() + a.residues().size());
    ASSERT_TRUE(seen.insert(flat).second) << v;
  }
}

TEST_F(Plain, Serialization) {
  const auto& vk = keys_->vk;
  Bytes data = serialize(vk);
  PlainVerificationKey back = parse_plain_vk(data);
  EXPECT_EQ(serialize(back), data);
  EXPECT_EQ(back.a, vk.a);
  EXPECT_EQ(back.circuit, vk.circuit);
  Bytes sk = serialize(keys_->sk, vk.params);
  PlainSigningKey sk_back = parse_plain_sk(sk, back);
  EXPECT_EQ(sk_back.t_a.basis(), keys_->sk.t_a.basis());
  EXPECT_THROW(parse_plain_sk(sk, reduction_->vk), FormatError);
  RandomStream rng = RandomStream::from_u64(63);
  IntVector sig = plain_sign(sk_back, back, bits_of(9, 8), rng);
  EXPECT_EQ(parse_plain_signature(serialize_plain_signature(sig)), sig);
  EXPECT_TRUE(plain_verify(vk, bits_of(9, 8), sig));
  Bytes params = serialize(vk.params);
  EXPECT_EQ(parse_plain_params(params).q, vk.params.q);
  Bytes bad = data;
  bad[5] ^= 1;
  EXPECT_THROW(parse_plain_vk(bad), FormatError);
  bad = data;
  bad.resize(bad.size() - 3);
  EXPECT_THROW(parse_plain_vk(bad), FormatError);
  // s edited without the rest of the parameters.
  bad = params;
  bad[6 + 5 * 4 + 8] ^= 1;
  EXPECT_THROW(parse_plain_params(bad), FormatError);
  EXPECT_THROW(parse_plain_signature(data), FormatError);
}

TEST_F(Plain, Determinism) {
  RandomStream a = RandomStream::from_u64(64), b = RandomStream::from_u64(64);
  PlainKeyPair ka = plain_gen(*params_, a), kb = plain_gen(*params_, b);
  EXPECT_EQ(serialize(ka.vk), serialize(kb.vk));
  auto msg = bits_of(3, 8);
  EXPECT_EQ(plain_sign(ka.sk, ka.vk, msg, a), plain_sign(kb.sk, kb.vk, msg, b));
}

TEST_F(Plain, PuncturedKeyCollapses) {
  const auto& r = *reduction_;
  const Modulus q(params_->q);
  RandomStream rng = RandomStream::from_u64(65);
  for (int i = 0; i < 4; ++i) {
    auto msg = bits_of(rng.uniform(256), 8);
    auto [rr, bit] = r.state.combined_randomness(r.vk, msg);
    EXPECT_EQ(bit, prf_eval(r.state.prf, msg));
    ModMatrix right = mat_mul(r.vk.a, rr);
    if (!bit) right = right + padded_gadget(params_->n, q, params_->m);
    EXPECT_EQ(r.vk.f_matrix(msg), hcat(r.vk.a, right));
    EXPECT_LE(spectral_norm(rr), params_->r_bound);
  }
}

TEST_F(Plain, ReductionSignsOnlyOutsideBlindSet) {
  const auto& r = *reduction_;
  RandomStream rng = RandomStream::from_u64(66);
  int signed_count = 0, refused = 0;
  for (std::uint64_t v = 0; v < 256 && (signed_count < 3 || refused < 3); ++v) {
    auto msg = bits_of(v, 8);
    const bool blinded = prf_eval(r.state.prf, msg);
    if (blinded && refused >= 3) continue;
    if (!blinded && signed_count >= 3) continue;
    std::optional<IntVector> sig = reduction_sign(r, msg, rng);
    ASSERT_EQ(sig.has_value(), !blinded) << v;
    if (sig) {
      ++signed_count;
      EXPECT_TRUE(plain_verify(r.vk, msg, *sig));
    } else {
      ++refused;
    }
  }
  EXPECT_EQ(signed_count, 3);
  EXPECT_EQ(refused, 3);
}

TEST_F(Plain, ExtractionFromPlantedForgery) {
  const auto& r = *reduction_;
  RandomStream rng = RandomStream::from_u64(67);
  std::vector<std::uint8_t> target;
  for (std::uint64_t v = 0; v < 256; ++v) {
    if (prf_eval(r.state.prf, bits_of(v, 8))) {
      target = bits_of(v, 8);
      break;
    }
  }
  ASSERT_FALSE(target.empty());
  // The trapdoor of the challenge plays the forger.
  const ModMatrix right = r.vk.a_prime - r.vk.prf_matrix(target);
  const ModMatrix zero(params_->n, 1, Modulus(params_->q));
  IntVector forgery = sample_left(r.vk.a, right, challenge_->t_a, zero, params_->s, rng);
  ASSERT_TRUE(plain_verify(r.vk, target, forgery));
  IntVector e = reduction_extract(r, target, forgery);
  EXPECT_TRUE(mat_mul(challenge_->a, e).is_zero());
  EXPECT_FALSE(e.isZero());
  EXPECT_LE(e.cast<double>().norm(), params_->beta);
}

TEST_F(Plain, RealAndPuncturedKeysHaveSameMarginals) {
  std::vector<double> real(16, 0), punctured(16, 0);
  bucket_key(keys_->vk, real);
  bucket_key(reduction_->vk, punctured);
  EXPECT_GT(oracle::chi2_two_sample(real, punctured), 0.001);
}

}  // namespace
}  // namespace blindlat
