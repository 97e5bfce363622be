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

// Lattice signatures in the plain model: a signature on M is a short
// nonzero vector in the kernel lattice of F_M = [A | A' - A_PRF,M], where
// A_PRF,M is the key-homomorphic evaluation of a biased PRF circuit on the
// public key-bit and message-bit encodings.

#ifndef BLINDLAT_PLAINSIG_HPP_
#define BLINDLAT_PLAINSIG_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blindlat/biasedprf.hpp"
#include "blindlat/gauss.hpp"
#include "blindlat/homeval.hpp"
#include "blindlat/modq.hpp"

namespace blindlat {

// Instantiated constants behind the asymptotic parameter rules.
struct PlainConstants {
  // |R_C|_2 <= kappa 4^d m^{3/2} for evaluated circuits.
  double kappa = 0.25;
  // |R|_2 <= c_sign sqrt(2m) for R uniform in {-1,1}^{m x m}.
  double c_sign = 12.0;
  // Smoothing parameter slack delta in omega(sqrt(log m)).
  double delta = 0.01;
  // q >= beta * c_q * sqrt(n log2 n).
  double c_q = 1.0;
  friend bool operator==(const PlainConstants&, const PlainConstants&) = default;
};

struct PlainParams {
  Index n = 0, t = 0, k = 0;
  int d = 0;
  Index m = 0;
  std::uint64_t q = 0;
  double s = 0, beta = 0, sigsize = 0;
  // Bound on |R_A' - R_PRF,M|_2 used for s and beta.
  double r_bound = 0;
  Epsilon epsilon{3, 4};
  PlainConstants constants;
  // One line per constraint, with the checked values.
  std::vector<std::string> report;
};

// Smallest prime q (and the matching m, s, beta, sigsize) meeting every
// constraint, found by iterating (m, q) to a fixed point. Throws
// ParameterError when q would reach 2^62.
PlainParams plain_params(Index n, Index t, Index k, int d, const PlainConstants& constants = {});
// Parameters for the biased PRF circuit with the given bias.
PlainParams plain_params_for(Index n, Index t, const Epsilon& epsilon, const PlainConstants& constants = {});

struct PlainVerificationKey {
  PlainParams params;
  ModMatrix a, a_prime;
  std::vector<ModMatrix> b;
  ModMatrix c0, c1;
  NandCircuit circuit{1};

  // Inputs to the circuit: key-bit encodings, then C_{M_j}.
  std::vector<EncodedBit> public_inputs(std::span<const std::uint8_t> msg) const;
  // A_PRF,M.
  ModMatrix prf_matrix(std::span<const std::uint8_t> msg) const;
  // F_M = [A | A' - A_PRF,M].
  ModMatrix f_matrix(std::span<const std::uint8_t> msg) const;
};

struct PlainSigningKey {
  ShortBasis t_a;
};

struct PlainKeyPair {
  PlainVerificationKey vk;
  PlainSigningKey sk;
};

PlainKeyPair plain_gen(const PlainParams& p, RandomStream& rng);
// Throws DimensionError unless |msg| = t; WidthTooSmall if s is below the
// sampler bound; std::runtime_error after 100 zero draws.
IntVector plain_sign(const PlainSigningKey& sk, const PlainVerificationKey& vk,
                     std::span<const std::uint8_t> msg, RandomStream& rng);
bool plain_verify(const PlainVerificationKey& vk, std::span<const std::uint8_t> msg, const IntVector& sig);

// Test fixture that makes the security reduction executable. The public
// key embeds a challenge matrix A and encodes the bits of a biased PRF key.
struct ReductionState {
  IntMatrix r_a_prime;
  std::vector<IntMatrix> r_b;
  IntMatrix r_c0, r_c1;
  BiasedPrfKey prf;

  std::vector<EncodedBit> secret_inputs(const PlainVerificationKey& vk, std::span<const std::uint8_t> msg) const;
  // R = R_A' - R_PRF,M together with PRF(M).
  std::pair<IntMatrix, bool> combined_randomness(const PlainVerificationKey& vk,
                                                 std::span<const std::uint8_t> msg) const;
};

struct ReductionSetup {
  PlainVerificationKey vk;
  ReductionState state;
};

ReductionSetup reduction_gen(const PlainParams& p, const Epsilon& epsilon, const ModMatrix& challenge,
                             RandomStream& rng);
// Signature through the gadget trapdoor; nullopt exactly when PRF(M) = 1.
std::optional<IntVector> reduction_sign(const ReductionSetup& r, std::span<const std::uint8_t> msg,
                                        RandomStream& rng);
// e = d_1 + R d_2 for a forgery (d_1, d_2) on msg.
IntVector reduction_extract(const ReductionSetup& r, std::span<const std::uint8_t> msg, const IntVector& sig);

// PBUS block: magic, version, kind, parameters, then the key material.
Bytes serialize(const PlainParams& p);
PlainParams parse_plain_params(ByteSpan data);
Bytes serialize(const PlainVerificationKey& vk);
PlainVerificationKey parse_plain_vk(ByteSpan data);
Bytes serialize(const PlainSigningKey& sk, const PlainParams& p);
PlainSigningKey parse_plain_sk(ByteSpan data, const PlainVerificationKey& vk);
Bytes serialize_plain_signature(const IntVector& sig);
IntVector parse_plain_signature(ByteSpan data);

}  // namespace blindlat

#endif  // BLINDLAT_PLAINSIG_HPP_
