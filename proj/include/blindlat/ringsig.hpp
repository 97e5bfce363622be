// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// Ring signatures from a blind-unforgeable signature, lossy encryption and
// a two-message proof. A signature is (c1, c2, pi): c1 encrypts (sigma, vk)
// under the signer's lossy key, c2 encrypts zeros, and pi proves that one of
// them holds a valid member signature on R || m. Encryption and proof coins
// come from pairwise-independent functions of R || m, sampled once per call.

#ifndef BLINDLAT_RINGSIG_HPP_
#define BLINDLAT_RINGSIG_HPP_

#include <memory>
#include <stdexcept>

#include "blindlat/zapcore.hpp"

namespace blindlat {

using Gf128 = unsigned __int128;

// Product in GF(2^128) modulo x^128 + x^7 + x^2 + x + 1.
Gf128 gf128_mul(Gf128 a, Gf128 b);

// x -> a H(x) + b over GF(2^128), expanded to output_len bytes.
class PairwiseHash {
 public:
  // Throws ParameterError if a = 0.
  PairwiseHash(Gf128 a, Gf128 b, std::size_t output_len);
  static PairwiseHash sample(RandomStream& rng, std::size_t output_len = 32);

  Gf128 core(ByteSpan input) const;
  Bytes operator()(ByteSpan input) const;
  Gf128 a() const { return a_; }
  Gf128 b() const { return b_; }
  std::size_t output_len() const { return len_; }

 private:
  Gf128 a_, b_;
  std::size_t len_;
};

class SignerNotInRing : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RingParams {
  BaseScheme scheme = BaseScheme::kGpv;
  GpvConfig gpv{2, 17, 0};
  // Used for the plain base scheme only.
  Index plain_n = 2, plain_t = 8;
  Epsilon plain_epsilon{3, 4};
  LossyParams lossy;
  ZapParams zap;
  // Largest ring accepted by rs_sign.
  std::uint32_t max_ring = 1u << 20;
  // The base scheme these parameters select.
  std::unique_ptr<SignatureScheme> base() const;
};

struct RingSecretKey {
  BaseScheme scheme = BaseScheme::kGpv;
  Bytes sk;
  Bytes vk;
  LossyPublicKey pk;
  Bytes rho;
  RingVerificationKey public_key() const { return {scheme, vk, pk, rho}; }
};

struct RingKeyPair {
  RingVerificationKey vk;
  RingSecretKey sk;
  // Seed that rs_gen_from expands into this key pair.
  Bytes gen_randomness;
};

struct RingSignature {
  LossyCiphertext c1, c2;
  Bytes pi;
  friend bool operator==(const RingSignature&, const RingSignature&) = default;
};

// Pairwise-independent functions for r_c1, r_c2 and r_pi.
struct SigningCoins {
  PairwiseHash pi1, pi2, pi3;
  static SigningCoins sample(RandomStream& rng);
};

const Zap& default_zap();

RingKeyPair rs_gen(const RingParams& p, RandomStream& rng, const Zap& zap = default_zap());
// Deterministic in the 32-byte seed.
RingKeyPair rs_gen_from(const RingParams& p, ByteSpan seed, const Zap& zap = default_zap());
// Throws SignerNotInRing unless the signer's VK is a member.
RingSignature rs_sign(const RingSecretKey& sk, const Ring& ring, ByteSpan message, RandomStream& rng,
                      const Zap& zap = default_zap());
RingSignature rs_sign_with(const RingSecretKey& sk, const Ring& ring, ByteSpan message, const SigningCoins& coins,
                           const Zap& zap = default_zap());
// False on malformed input.
bool rs_verify(const Ring& ring, ByteSpan message, const RingSignature& sig, const Zap& zap = default_zap());
// The statement a signature proves membership of.
Statement rs_statement(const Ring& ring, ByteSpan message, const RingSignature& sig);

// RSSK and RSIG blocks; RSVK lives with the statement formats.
Bytes serialize(const RingSecretKey& sk);
RingSecretKey parse_ring_sk(ByteSpan data);
Bytes serialize(const RingSignature& sig);
RingSignature parse_ring_signature(ByteSpan data);

}  // namespace blindlat

#endif  // BLINDLAT_RINGSIG_HPP_
