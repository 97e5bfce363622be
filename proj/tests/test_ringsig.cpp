// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <unordered_set>

#include "blindlat/ringsig.hpp"
#include "oracles.hpp"
#include "ring_fixtures.hpp"

namespace blindlat {
namespace {

// Carry-less product into 256 bits, then reduction from the top bit down.
Gf128 reference_gf128_mul(Gf128 a, Gf128 b) {
  Gf128 lo = 0, hi = 0;
  for (int i = 0; i < 128; ++i) {
    if (!((b >> i) & 1)) continue;
    lo ^= a << i;
    if (i) hi ^= a >> (128 - i);
  }
  for (int i = 127; i >= 0; --i) {
    if (!((hi >> i) & 1)) continue;
    // x^(128+i) = x^i (x^7 + x^2 + x + 1)
    hi ^= Gf128{1} << i;
    const Gf128 poly = 0x87;
    lo ^= poly << i;
    if (i > 120) hi ^= poly >> (128 - i);
  }
  return lo;
}

Gf128 random128(RandomStream& rng) { return static_cast<Gf128>(rng.next_u64()) << 64 | rng.next_u64(); }

TEST(Gf128, MatchesReferenceAndFieldLaws) {
  RandomStream rng = RandomStream::from_u64(800);
  for (int t = 0; t < 500; ++t) {
    const Gf128 a = random128(rng), b = random128(rng), c = random128(rng);
    ASSERT_EQ(gf128_mul(a, b), reference_gf128_mul(a, b));
    EXPECT_EQ(gf128_mul(a, b), gf128_mul(b, a));
    EXPECT_EQ(gf128_mul(a, b ^ c), gf128_mul(a, b) ^ gf128_mul(a, c));
    EXPECT_EQ(gf128_mul(gf128_mul(a, b), c), gf128_mul(a, gf128_mul(b, c)));
    EXPECT_EQ(gf128_mul(a, 1), a);
  }
  // x * x^127 = x^128 = x^7 + x^2 + x + 1.
  EXPECT_EQ(gf128_mul(2, Gf128{1} << 127), Gf128{0x87});
}

TEST(PairwiseHash, RejectsZeroMultiplier) {
  EXPECT_THROW(PairwiseHash(0, 5, 32), ParameterError);
  RandomStream rng = RandomStream::from_u64(801);
  const PairwiseHash h = PairwiseHash::sample(rng, 48);
  EXPECT_NE(h.a(), Gf128{0});
  EXPECT_EQ(h(Bytes{'x'}).size(), 48u);
  EXPECT_EQ(h(Bytes{'x'}), h(Bytes{'x'}));
}

// Over random (a, b), 4-bit projections of the images of two fixed distinct
// inputs should be jointly uniform on 256 cells.
TEST(PairwiseHash, PairwiseIndependentProjections) {
  RandomStream rng = RandomStream::from_u64(802);
  const Bytes x{'x'}, y{'y'};
  std::vector<double> core_cells(256, 0), out_cells(256, 0);
  constexpr int kSamples = 10000;
  for (int t = 0; t < kSamples; ++t) {
    const PairwiseHash h = PairwiseHash::sample(rng);
    core_cells[static_cast<unsigned>(h.core(x) & 15) << 4 | static_cast<unsigned>(h.core(y) & 15)] += 1;
    out_cells[(h(x)[0] & 15u) << 4 | (h(y)[0] & 15u)] += 1;
  }
  const std::vector<double> uniform(256, 1.0 / 256);
  EXPECT_GT(oracle::chi2_gof(core_cells, uniform), 1e-3);
  EXPECT_GT(oracle::chi2_gof(out_cells, uniform), 1e-3);
}

TEST(PairwiseHash, NoCollisionsOnDistinctInputs) {
  RandomStream rng = RandomStream::from_u64(803);
  const PairwiseHash h = PairwiseHash::sample(rng);
  std::set<Gf128> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    ByteWriter w;
    w.u64(i);
    seen.insert(h.core(w.bytes()));
  }
  EXPECT_EQ(seen.size(), 100000u);
}

class Ring5 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    RandomStream rng = RandomStream::from_u64(810);
    pairs_ = new std::vector<RingKeyPair>;
    for (int i = 0; i < 5; ++i) pairs_->push_back(rs_gen(RingParams{}, rng));
  }
  static void TearDownTestSuite() { delete pairs_; }

  static Ring ring(std::size_t k) {
    Ring r;
    for (std::size_t i = 0; i < k; ++i) r.push_back((*pairs_)[i].vk);
    return r;
  }

  static std::vector<RingKeyPair>* pairs_;
  RandomStream rng_ = RandomStream::from_u64(811);
};
std::vector<RingKeyPair>* Ring5::pairs_ = nullptr;

TEST_F(Ring5, CompletenessAcrossSizes) {
  for (std::size_t k : {1, 2, 5}) {
    const Ring r = ring(k);
    for (std::size_t signer = 0; signer < k; ++signer) {
      const Bytes msg = rng_.bytes(8);
      const RingSignature sig = rs_sign((*pairs_)[signer].sk, r, msg, rng_);
      EXPECT_TRUE(rs_verify(r, msg, sig)) << "ring size " << k << " signer " << signer;
    }
  }
}

TEST_F(Ring5, ForeignMalformedMembersDoNotBreakSigning) {
  Ring r = ring(2);
  r.push_back(fixtures::malformed_member(rng_));
  r.insert(r.begin(), fixtures::malformed_member(rng_));
  const Bytes msg{'f'};
  const RingSignature sig = rs_sign((*pairs_)[1].sk, r, msg, rng_);
  EXPECT_TRUE(rs_verify(r, msg, sig));
}

TEST_F(Ring5, OrderAndDuplicatesIrrelevant) {
  const Ring r = ring(3);
  const Bytes msg{'o'};
  const RingSignature sig = rs_sign((*pairs_)[2].sk, r, msg, rng_);
  Ring shuffled{r[2], r[0], r[1], r[1]};
  EXPECT_TRUE(rs_verify(shuffled, msg, sig));
}

TEST_F(Ring5, VerificationRejectsChanges) {
  const Ring r = ring(3);
  const Bytes msg{'v', 'r'};
  const RingSignature sig = rs_sign((*pairs_)[0].sk, r, msg, rng_);
  ASSERT_TRUE(rs_verify(r, msg, sig));
  EXPECT_FALSE(rs_verify(r, Bytes{'v', 's'}, sig));
  EXPECT_FALSE(rs_verify(ring(2), msg, sig));
  EXPECT_FALSE(rs_verify(ring(4), msg, sig));
  EXPECT_FALSE(rs_verify(Ring{}, msg, sig));
  RingSignature swapped = sig;
  std::swap(swapped.c1, swapped.c2);
  // The proof names block 1, which now holds the dummy.
  EXPECT_FALSE(rs_verify(r, msg, swapped));
  RingSignature garbled = sig;
  garbled.pi.resize(garbled.pi.size() / 2);
  EXPECT_FALSE(rs_verify(r, msg, garbled));
  RingSignature flipped = sig;
  flipped.c1.c.set(0, 0, (flipped.c1.c(0, 0) + 1) % flipped.c1.c.modulus().value());
  EXPECT_FALSE(rs_verify(r, msg, flipped));
}

// Verification asks for a witness through one block only, so the dummy
// ciphertext can be changed without invalidating the signature.
TEST_F(Ring5, DummyBlockIsMalleable) {
  const Ring r = ring(2);
  const Bytes msg{'d', 'b'};
  RingSignature sig = rs_sign((*pairs_)[0].sk, r, msg, rng_);
  sig.c2.c.set(1, 5, (sig.c2.c(1, 5) + 1) % sig.c2.c.modulus().value());
  EXPECT_TRUE(rs_verify(r, msg, sig));
}

TEST_F(Ring5, SignerOutsideRingThrows) {
  EXPECT_THROW(rs_sign((*pairs_)[4].sk, ring(3), Bytes{'n'}, rng_), SignerNotInRing);
}

TEST_F(Ring5, DeterministicInCoins) {
  const Ring r = ring(2);
  const SigningCoins coins = SigningCoins::sample(rng_);
  const Bytes msg{'d'};
  const RingSignature a = rs_sign_with((*pairs_)[0].sk, r, msg, coins);
  const RingSignature b = rs_sign_with((*pairs_)[0].sk, r, msg, coins);
  EXPECT_EQ(a, b);
  const RingSignature c = rs_sign_with((*pairs_)[0].sk, r, msg, SigningCoins::sample(rng_));
  EXPECT_NE(serialize(a), serialize(c));
  EXPECT_TRUE(rs_verify(r, msg, c));
}

TEST_F(Ring5, StatementIsInLanguageThroughFirstBlock) {
  const Ring r = ring(2);
  const Bytes msg{'s'};
  const RingSignature sig = rs_sign((*pairs_)[1].sk, r, msg, rng_);
  const Statement x = rs_statement(r, msg, sig);
  auto [which, w] = StubZap::open(sig.pi);
  EXPECT_EQ(which, 1);
  EXPECT_TRUE(in_l(x, w, 1));
  EXPECT_FALSE(in_l(x, w, 2));
  EXPECT_EQ(w.vk, (*pairs_)[1].vk.vk);
  EXPECT_EQ(x.c1.bits(), x.c2.bits());
}

TEST_F(Ring5, SerializationRoundTrips) {
  const Ring r = ring(2);
  const RingSignature sig = rs_sign((*pairs_)[0].sk, r, Bytes{'z'}, rng_);
  EXPECT_EQ(parse_ring_signature(serialize(sig)), sig);
  const RingSecretKey sk = parse_ring_sk(serialize((*pairs_)[0].sk));
  EXPECT_EQ(serialize(sk), serialize((*pairs_)[0].sk));
  EXPECT_EQ(sk.public_key(), (*pairs_)[0].vk);
  Bytes bad = serialize(sig);
  bad[4] = 99;
  EXPECT_THROW(parse_ring_signature(bad), FormatError);
}

TEST_F(Ring5, GenerationIsAFunctionOfTheSeed) {
  const RingKeyPair& kp = (*pairs_)[3];
  const RingKeyPair again = rs_gen_from(RingParams{}, kp.gen_randomness);
  EXPECT_EQ(again.vk, kp.vk);
  EXPECT_EQ(serialize(again.sk), serialize(kp.sk));
  EXPECT_THROW(rs_gen_from(RingParams{}, Bytes(31, 0)), ParameterError);
  // Honest member keys are lossy: no secret of the key's shape decrypts.
  EXPECT_TRUE(kp.vk.pk.params == RingParams{}.lossy);
}

TEST(RingParamsTest, PayloadFitsDefaultLossyKey) {
  RandomStream rng = RandomStream::from_u64(812);
  const RingKeyPair kp = rs_gen(fixtures::fast_ring_params(), rng);
  const RingSignature sig = rs_sign(kp.sk, Ring{kp.vk}, Bytes{'p'}, rng);
  EXPECT_TRUE(rs_verify(Ring{kp.vk}, Bytes{'p'}, sig));
  EXPECT_TRUE(fixtures::fast_lossy().decryption_exact());
  EXPECT_TRUE(RingParams{}.lossy.lossy_hiding());
  EXPECT_FALSE(fixtures::fast_lossy().lossy_hiding());
}

}  // namespace
}  // namespace blindlat
