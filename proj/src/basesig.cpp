// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/basesig.hpp"

#include <bit>
#include <cmath>

#include "blindlat/hashing.hpp"

namespace blindlat {
namespace {

constexpr std::uint8_t kVersion = 1;

unsigned entry_width(const PsfParams& p) {
  return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(std::floor(p.domain_radius())))) + 1;
}

}  // namespace

std::string_view scheme_name(BaseScheme s) {
  switch (s) {
    case BaseScheme::kGpv:
      return "gpv";
    case BaseScheme::kPlain:
      return "plain";
  }
  return "unknown";
}

BaseScheme parse_scheme_name(std::string_view name) {
  if (name == "gpv") return BaseScheme::kGpv;
  if (name == "plain") return BaseScheme::kPlain;
  throw ParameterError("unknown signature scheme: " + std::string(name));
}

Bytes GpvScheme::pack_key(const GpvPublicKey& pk) {
  ByteWriter w;
  w.magic("GPVC").u8(kVersion);
  w.u32(static_cast<std::uint32_t>(pk.params.n)).u32(static_cast<std::uint32_t>(pk.params.m));
  w.u64(pk.params.q.value()).f64(pk.params.s);
  BitWriter bits;
  for (Index i = 0; i < pk.a.rows(); ++i)
    for (Index j = 0; j < pk.a.cols(); ++j) bits.put(pk.a(i, j), pk.params.q.bits());
  w.blob(std::move(bits).take());
  return std::move(w).take();
}

GpvPublicKey GpvScheme::unpack_key(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("GPVC");
  if (r.u8() != kVersion) throw FormatError("GPVC: unsupported version");
  const Index n = r.u32(), m = r.u32();
  const std::uint64_t qv = r.u64();
  const double s = r.f64();
  Bytes packed = r.blob();
  r.expect_done();
  if (n < 1 || m < 1 || n > 4096 || m > 65536 || !(s > 0) || !std::isfinite(s)) {
    throw FormatError("GPVC: bad parameters");
  }
  PsfParams p = [&] {
    try {
      return PsfParams{n, m, Modulus(qv), s};
    } catch (const ParameterError& e) {
      throw FormatError(std::string("GPVC: ") + e.what());
    }
  }();
  if (packed.size() != (static_cast<std::size_t>(n * m) * p.q.bits() + 7) / 8) throw FormatError("GPVC: key size");
  BitReader bits(packed);
  ModMatrix a(n, m, p.q);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) {
      const std::uint64_t v = bits.get(p.q.bits());
      if (v >= qv) throw FormatError("GPVC: entry not reduced");
      a.set(i, j, v);
    }
  bits.expect_done();
  return {std::move(a), p};
}

Bytes GpvScheme::pack_signature(const PsfParams& p, const IntVector& sigma) {
  if (sigma.size() != p.m) throw DimensionError("pack_signature: length differs from m");
  const unsigned width = entry_width(p);
  BitWriter bits;
  for (Index i = 0; i < sigma.size(); ++i) {
    const std::int64_t x = sigma(i);
    const auto zz = (static_cast<std::uint64_t>(x) << 1) ^ static_cast<std::uint64_t>(x >> 63);
    if (std::bit_width(zz) > width) throw ParameterError("pack_signature: entry exceeds the domain radius");
    bits.put(zz, width);
  }
  return std::move(bits).take();
}

IntVector GpvScheme::unpack_signature(const PsfParams& p, ByteSpan data) {
  const unsigned width = entry_width(p);
  if (data.size() != (static_cast<std::size_t>(p.m) * width + 7) / 8) throw FormatError("GPVC: signature size");
  BitReader bits(data);
  IntVector sigma(p.m);
  for (Index i = 0; i < p.m; ++i) {
    const std::uint64_t zz = bits.get(width);
    sigma(i) = static_cast<std::int64_t>(zz >> 1) ^ -static_cast<std::int64_t>(zz & 1);
  }
  bits.expect_done();
  return sigma;
}

std::pair<Bytes, Bytes> GpvScheme::gen(RandomStream& rng) const {
  GpvKeys keys = gpv_gen(config_, rng);
  return {pack_key(keys.public_key()), serialize(keys)};
}

Bytes GpvScheme::sign(ByteSpan sk, ByteSpan, ByteSpan msg, RandomStream&) const {
  const GpvKeys keys = parse_gpv_keys(sk);
  return pack_signature(keys.psf.params, gpv_sign(keys, msg).sigma);
}

bool GpvScheme::verify(ByteSpan vk, ByteSpan msg, ByteSpan sig) const {
  try {
    const GpvPublicKey pk = unpack_key(vk);
    return gpv_verify(pk, msg, {unpack_signature(pk.params, sig)});
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::uint8_t> PlainScheme::digest(ByteSpan msg, Index t) {
  const Bytes h = hash_parts("blindlat.basesig.plain", {msg}, static_cast<std::size_t>((t + 7) / 8));
  std::vector<std::uint8_t> bits = to_bits(h);
  bits.resize(static_cast<std::size_t>(t));
  return bits;
}

std::pair<Bytes, Bytes> PlainScheme::gen(RandomStream& rng) const {
  PlainKeyPair kp = plain_gen(params_, rng);
  return {serialize(kp.vk), serialize(kp.sk, kp.vk.params)};
}

Bytes PlainScheme::sign(ByteSpan sk, ByteSpan vk, ByteSpan msg, RandomStream& rng) const {
  const PlainVerificationKey key = parse_plain_vk(vk);
  const PlainSigningKey secret = parse_plain_sk(sk, key);
  return serialize_plain_signature(plain_sign(secret, key, digest(msg, key.params.t), rng));
}

bool PlainScheme::verify(ByteSpan vk, ByteSpan msg, ByteSpan sig) const {
  try {
    const PlainVerificationKey key = parse_plain_vk(vk);
    return plain_verify(key, digest(msg, key.params.t), parse_plain_signature(sig));
  } catch (const std::exception&) {
    return false;
  }
}

std::unique_ptr<SignatureScheme> scheme_for(BaseScheme s) {
  switch (s) {
    case BaseScheme::kGpv:
      return std::make_unique<GpvScheme>();
    case BaseScheme::kPlain:
      return std::make_unique<PlainScheme>(PlainParams{});
  }
  throw ParameterError("scheme_for: unknown scheme");
}

bool base_verify(BaseScheme s, ByteSpan vk, ByteSpan msg, ByteSpan sig) {
  if (s != BaseScheme::kGpv && s != BaseScheme::kPlain) return false;
  return scheme_for(s)->verify(vk, msg, sig);
}

}  // namespace blindlat
