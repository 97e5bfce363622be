// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// Relations behind the ring signature proof. A statement (R, m, c1, c2) is
// in L when one of c1, c2 encrypts a valid signature of a ring member under
// its key, and in the super-complement L~ when a master key of the lossy PKE
// explains every member key and neither ciphertext decrypts to a valid
// member signature.

#ifndef BLINDLAT_ZAPCORE_HPP_
#define BLINDLAT_ZAPCORE_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include "blindlat/basesig.hpp"
#include "blindlat/lossype.hpp"

namespace blindlat {

// VK = (vk, pk, rho) with the base scheme tag.
struct RingVerificationKey {
  BaseScheme scheme = BaseScheme::kGpv;
  Bytes vk;
  LossyPublicKey pk;
  Bytes rho;
  friend bool operator==(const RingVerificationKey&, const RingVerificationKey&) = default;
};
using Ring = std::vector<RingVerificationKey>;

void write_ring_vk(ByteWriter& w, const RingVerificationKey& vk);
RingVerificationKey read_ring_vk(ByteReader& r);
Bytes serialize(const RingVerificationKey& vk);
RingVerificationKey parse_ring_vk(ByteSpan data);

// Member encodings sorted as byte strings with duplicates dropped, each
// length-prefixed, after a member count.
Bytes canonical_ring(const Ring& ring);
// The lexicographically smallest member; ring non-empty.
const RingVerificationKey& smallest_member(const Ring& ring);
// The bytes R || m signed by the base scheme.
Bytes ring_message(const Ring& ring, ByteSpan message);

// Plaintext of c1: u32 |sigma|, sigma, vk.
Bytes encode_payload(ByteSpan sigma, ByteSpan vk);
// nullopt if the length prefix overruns the data.
std::optional<std::pair<Bytes, Bytes>> decode_payload(ByteSpan payload);

struct Statement {
  Ring ring;
  Bytes message;
  LossyCiphertext c1, c2;
};

struct Witness {
  BaseScheme scheme = BaseScheme::kGpv;
  Bytes vk;
  LossyPublicKey pk;
  Bytes sigma;
  Bytes r_c;
};

struct NonWitness {
  MasterSecretKey msk;
};

Bytes serialize(const Statement& x);
Statement parse_statement(ByteSpan data);
Bytes serialize(const Witness& w);
Witness parse_witness(ByteSpan data);

// R1: (vk, pk) belongs to a ring member.
bool rel_r1(const Ring& ring, const Witness& w);
// R2: re-encryption of (sigma, vk) under pk with r_c gives c byte for byte.
bool rel_r2(const LossyCiphertext& c, const Witness& w);
// R3: sigma verifies on R || m under vk.
bool rel_r3(const Ring& ring, ByteSpan message, const Witness& w);
// R' = R1 and R2 and R3 on the block (ring, m, c).
bool rel_r_prime(const Ring& ring, ByteSpan message, const LossyCiphertext& c, const Witness& w);
// Membership of x witnessed through block 1 or 2.
bool in_l(const Statement& x, const Witness& w, int which);
// R4: every member key is explained by the master key.
bool rel_r4(const Ring& ring, const NonWitness& nw);
// R5: some member key decrypts c to a signature on R || m valid under that
// member's own vk.
bool rel_r5(const Ring& ring, ByteSpan message, const LossyCiphertext& c, const NonWitness& nw);
// Both blocks satisfy R4 and fail R5.
bool in_l_tilde(const Statement& x, const NonWitness& nw);

class ZapContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ZapParams {
  // Statement size, proof size bound and verifier depth bound. Recorded for
  // a real instantiation; the stub does not consume them.
  Index n = 0;
  Index ell_tilde = 0;
  Index depth = 0;
  std::size_t rho_bytes = 32;
  friend bool operator==(const ZapParams&, const ZapParams&) = default;
};

struct ZapTranscript {
  Bytes rho;
  Bytes pi;
};

// Two-message public-coin proof for L.
class Zap {
 public:
  virtual ~Zap() = default;
  virtual const ZapParams& params() const = 0;
  // Uniform first message of params().rho_bytes bytes.
  virtual Bytes first_message(RandomStream& rng) const = 0;
  // Throws ZapContractError unless in_l(x, w, 1) or in_l(x, w, 2).
  virtual Bytes prove(ByteSpan rho, const Statement& x, const Witness& w, ByteSpan r_pi) const = 0;
  virtual bool verify(ByteSpan rho, const Statement& x, ByteSpan pi) const = 0;
  // False for implementations whose proofs reveal the witness.
  virtual bool witness_indistinguishable() const = 0;
};

// Reference implementation for plumbing: the proof is the witness itself
// and verification re-runs the relation. It has no privacy at all.
class StubZap final : public Zap {
 public:
  explicit StubZap(ZapParams params = {}) : params_(params) {}
  const ZapParams& params() const override { return params_; }
  Bytes first_message(RandomStream& rng) const override;
  Bytes prove(ByteSpan rho, const Statement& x, const Witness& w, ByteSpan r_pi) const override;
  bool verify(ByteSpan rho, const Statement& x, ByteSpan pi) const override;
  bool witness_indistinguishable() const override { return false; }

  // Block index and witness carried by a stub proof.
  static std::pair<int, Witness> open(ByteSpan pi);

 private:
  ZapParams params_;
};

}  // namespace blindlat

#endif  // BLINDLAT_ZAPCORE_HPP_
