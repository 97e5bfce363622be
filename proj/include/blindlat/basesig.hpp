// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// Byte-level signing interface over the two lattice schemes, used by the
// security games and as the base signature of the ring compiler.

#ifndef BLINDLAT_BASESIG_HPP_
#define BLINDLAT_BASESIG_HPP_

#include <memory>
#include <string_view>
#include <utility>

#include "blindlat/gpv.hpp"
#include "blindlat/plainsig.hpp"

namespace blindlat {

enum class BaseScheme : std::uint8_t { kGpv = 1, kPlain = 2 };

std::string_view scheme_name(BaseScheme s);
// Throws ParameterError for unknown names.
BaseScheme parse_scheme_name(std::string_view name);

class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual BaseScheme id() const = 0;
  // (vk, sk) in the scheme's byte encoding.
  virtual std::pair<Bytes, Bytes> gen(RandomStream& rng) const = 0;
  virtual Bytes sign(ByteSpan sk, ByteSpan vk, ByteSpan msg, RandomStream& rng) const = 0;
  // False on any malformed input.
  virtual bool verify(ByteSpan vk, ByteSpan msg, ByteSpan sig) const = 0;
};

// GPV with bit-packed keys and signatures: "GPVC" keys carry the PSF
// parameters, signatures are fixed-width zigzag entries sized by the domain
// radius. Secret keys use the GPVS format.
class GpvScheme final : public SignatureScheme {
 public:
  explicit GpvScheme(GpvConfig config = {}) : config_(config) {}
  BaseScheme id() const override { return BaseScheme::kGpv; }
  std::pair<Bytes, Bytes> gen(RandomStream& rng) const override;
  Bytes sign(ByteSpan sk, ByteSpan vk, ByteSpan msg, RandomStream& rng) const override;
  bool verify(ByteSpan vk, ByteSpan msg, ByteSpan sig) const override;
  const GpvConfig& config() const { return config_; }

  static Bytes pack_key(const GpvPublicKey& pk);
  static GpvPublicKey unpack_key(ByteSpan data);
  static Bytes pack_signature(const PsfParams& p, const IntVector& sigma);
  static IntVector unpack_signature(const PsfParams& p, ByteSpan data);

 private:
  GpvConfig config_;
};

// The plain-model scheme over t-bit digests of the message.
class PlainScheme final : public SignatureScheme {
 public:
  explicit PlainScheme(PlainParams params) : params_(std::move(params)) {}
  BaseScheme id() const override { return BaseScheme::kPlain; }
  std::pair<Bytes, Bytes> gen(RandomStream& rng) const override;
  Bytes sign(ByteSpan sk, ByteSpan vk, ByteSpan msg, RandomStream& rng) const override;
  bool verify(ByteSpan vk, ByteSpan msg, ByteSpan sig) const override;
  const PlainParams& params() const { return params_; }

  static std::vector<std::uint8_t> digest(ByteSpan msg, Index t);

 private:
  PlainParams params_;
};

// Signing and verification read everything from the key bytes, so an
// instance with default parameters serves every key of that scheme.
std::unique_ptr<SignatureScheme> scheme_for(BaseScheme s);
bool base_verify(BaseScheme s, ByteSpan vk, ByteSpan msg, ByteSpan sig);

}  // namespace blindlat

#endif  // BLINDLAT_BASESIG_HPP_
