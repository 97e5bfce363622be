// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// Dual-mode lossy public-key encryption over LWE. An injective key is
// A = [B ; s^T B + e^T]; a lossy key is a uniform matrix. Bit j of a
// plaintext encrypts as A R_j + m_j G with R_j in {-1,1}^{mbar x mbar}.

#ifndef BLINDLAT_LOSSYPE_HPP_
#define BLINDLAT_LOSSYPE_HPP_

#include <array>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blindlat/modq.hpp"

namespace blindlat {

class UnknownKey : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LossyParams {
  Index n = 2;
  Index mbar = 128;
  std::uint64_t q = 4093;
  // Error entries are uniform in [-bound, bound].
  std::uint32_t bound = 7;

  // Throws ParameterError unless q is prime and mbar fits the padded gadget.
  void validate() const;
  Modulus modulus() const { return Modulus(q); }
  // Gadget column decrypted for each bit: the power of two farthest from 0
  // mod q, as an offset inside the last row block.
  unsigned decode_digit() const;
  // |centered(2^decode_digit)|.
  std::uint64_t decode_threshold() const;
  // mbar * bound < threshold / 2, so decryption under a valid key is exact.
  bool decryption_exact() const;
  // mbar > (n + 2) log2 q + 64.
  bool lossy_hiding() const;
  friend bool operator==(const LossyParams&, const LossyParams&) = default;
};

struct LossyPublicKey {
  LossyParams params;
  ModMatrix a;  // (n + 1) x mbar
  friend bool operator==(const LossyPublicKey&, const LossyPublicKey&) = default;
};

struct MasterSecretKey {
  LossyParams params;
  std::array<std::uint8_t, 32> prf_key{};
  std::uint32_t count = 0;
};

struct LossySecretKey {
  LossyParams params;
  std::uint32_t index = 0;
  std::vector<std::uint64_t> s;  // length n
};

struct LossyCiphertext {
  Index mbar = 1;
  ModMatrix c;  // (n + 1) x (mbar * bits)
  Index bits() const { return c.cols() / mbar; }
  friend bool operator==(const LossyCiphertext&, const LossyCiphertext&) = default;
};

// Q injective keys derived from a fresh PRF key; Q >= 1.
std::pair<std::vector<LossyPublicKey>, MasterSecretKey> msk_gen(const LossyParams& p, std::uint32_t count,
                                                               RandomStream& rng);
// The i-th key pair of msk, i < count.
std::pair<LossyPublicKey, LossySecretKey> msk_derive(const MasterSecretKey& msk, std::uint32_t index);
// O(count) scan; throws UnknownKey if pk is not one of the msk keys.
LossySecretKey msk_ext(const MasterSecretKey& msk, const LossyPublicKey& pk);

// A uniform key; the returned transcript is rnd_ext(pk).
std::pair<LossyPublicKey, Bytes> ksam_lossy(const LossyParams& p, RandomStream& rng);
// The coins of ksam_lossy are the key itself.
Bytes rnd_ext(const LossyPublicKey& pk);

LossyCiphertext le_enc(const LossyPublicKey& pk, std::span<const std::uint8_t> bits, ByteSpan seed);
std::vector<std::uint8_t> le_dec(const LossySecretKey& sk, const LossyCiphertext& ct);
// Byte-level helpers over the bits of the data, least significant first.
LossyCiphertext le_enc_bytes(const LossyPublicKey& pk, ByteSpan data, ByteSpan seed);
Bytes le_dec_bytes(const LossySecretKey& sk, const LossyCiphertext& ct);
bool le_valid(const LossyPublicKey& pk, const LossySecretKey& sk);
// (-s, 1)^T applied to the columns of a block; raw decryption values.
std::vector<std::int64_t> le_phase(const LossySecretKey& sk, const ModMatrix& block);

// LEPK and LECT blocks, entries packed at ceil(log2 q) bits.
void write_lossy_pk(ByteWriter& w, const LossyPublicKey& pk);
LossyPublicKey read_lossy_pk(ByteReader& r);
Bytes serialize(const LossyPublicKey& pk);
LossyPublicKey parse_lossy_pk(ByteSpan data);
void write_lossy_ct(ByteWriter& w, const LossyCiphertext& ct);
LossyCiphertext read_lossy_ct(ByteReader& r);
Bytes serialize(const LossyCiphertext& ct);
LossyCiphertext parse_lossy_ct(ByteSpan data);
Bytes serialize(const MasterSecretKey& msk);
MasterSecretKey parse_msk(ByteSpan data);

}  // namespace blindlat

#endif  // BLINDLAT_LOSSYPE_HPP_
