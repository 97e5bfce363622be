// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/ringsig.hpp"

#include <algorithm>

#include "blindlat/hashing.hpp"

namespace blindlat {
namespace {

constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kMaxRing = std::size_t{1} << 20;

Gf128 load128(ByteSpan b) {
  Gf128 v = 0;
  for (std::size_t i = 0; i < 16; ++i) v |= static_cast<Gf128>(b[i]) << (8 * i);
  return v;
}

Bytes store128(Gf128 v) {
  Bytes b(16);
  for (std::size_t i = 0; i < 16; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return b;
}

}  // namespace

Gf128 gf128_mul(Gf128 a, Gf128 b) {
  Gf128 r = 0;
  for (int i = 0; i < 128; ++i) {
    if ((b >> i) & 1) r ^= a;
    const bool carry = (a >> 127) & 1;
    a <<= 1;
    if (carry) a ^= 0x87;
  }
  return r;
}

PairwiseHash::PairwiseHash(Gf128 a, Gf128 b, std::size_t output_len) : a_(a), b_(b), len_(output_len) {
  if (a == 0) throw ParameterError("PairwiseHash: a must be nonzero");
}

PairwiseHash PairwiseHash::sample(RandomStream& rng, std::size_t output_len) {
  Gf128 a = 0;
  while (a == 0) a = load128(rng.bytes(16));
  return {a, load128(rng.bytes(16)), output_len};
}

Gf128 PairwiseHash::core(ByteSpan input) const {
  return gf128_mul(a_, load128(hash_parts("blindlat.pi.input", {input}, 16))) ^ b_;
}

Bytes PairwiseHash::operator()(ByteSpan input) const {
  const Bytes c = store128(core(input));
  return hash_parts("blindlat.pi.expand", {c}, len_);
}

std::unique_ptr<SignatureScheme> RingParams::base() const {
  if (scheme == BaseScheme::kGpv) return std::make_unique<GpvScheme>(gpv);
  return std::make_unique<PlainScheme>(plain_params_for(plain_n, plain_t, plain_epsilon));
}

SigningCoins SigningCoins::sample(RandomStream& rng) {
  PairwiseHash a = PairwiseHash::sample(rng), b = PairwiseHash::sample(rng), c = PairwiseHash::sample(rng);
  return {a, b, c};
}

const Zap& default_zap() {
  static const StubZap zap;
  return zap;
}

RingKeyPair rs_gen(const RingParams& p, RandomStream& rng, const Zap& zap) {
  return rs_gen_from(p, rng.bytes(32), zap);
}

RingKeyPair rs_gen_from(const RingParams& p, ByteSpan seed, const Zap& zap) {
  if (seed.size() != 32) throw ParameterError("rs_gen_from: seed must be 32 bytes");
  RandomStream rng = RandomStream::derive("blindlat.ringsig.gen", seed);
  auto [vk, sk] = p.base()->gen(rng);
  // Honest keys are sampled in lossy mode.
  auto [pk, coins] = ksam_lossy(p.lossy, rng);
  Bytes rho = zap.first_message(rng);
  RingSecretKey secret{p.scheme, std::move(sk), std::move(vk), std::move(pk), std::move(rho)};
  RingVerificationKey pub = secret.public_key();
  return {std::move(pub), std::move(secret), Bytes(seed.begin(), seed.end())};
}

RingSignature rs_sign(const RingSecretKey& sk, const Ring& ring, ByteSpan message, RandomStream& rng,
                      const Zap& zap) {
  return rs_sign_with(sk, ring, message, SigningCoins::sample(rng), zap);
}

RingSignature rs_sign_with(const RingSecretKey& sk, const Ring& ring, ByteSpan message, const SigningCoins& coins,
                           const Zap& zap) {
  if (ring.size() > kMaxRing) throw ParameterError("rs_sign: ring larger than 2^20 members");
  const RingVerificationKey self = sk.public_key();
  if (std::find(ring.begin(), ring.end(), self) == ring.end()) {
    throw SignerNotInRing("rs_sign: the signer's key is not in the ring");
  }
  const Bytes signed_bytes = ring_message(ring, message);
  const Bytes r_c1 = coins.pi1(signed_bytes), r_c2 = coins.pi2(signed_bytes), r_pi = coins.pi3(signed_bytes);
  RandomStream base_coins = RandomStream::derive("blindlat.ringsig.base", r_pi);
  Bytes sigma = scheme_for(sk.scheme)->sign(sk.sk, sk.vk, signed_bytes, base_coins);
  const Bytes payload = encode_payload(sigma, sk.vk);
  Statement x{ring, Bytes(message.begin(), message.end()), le_enc_bytes(sk.pk, payload, r_c1),
              le_enc_bytes(sk.pk, Bytes(payload.size(), 0), r_c2)};
  Witness w{sk.scheme, sk.vk, sk.pk, std::move(sigma), r_c1};
  Bytes pi = zap.prove(smallest_member(ring).rho, x, w, r_pi);
  return {std::move(x.c1), std::move(x.c2), std::move(pi)};
}

Statement rs_statement(const Ring& ring, ByteSpan message, const RingSignature& sig) {
  return {ring, Bytes(message.begin(), message.end()), sig.c1, sig.c2};
}

bool rs_verify(const Ring& ring, ByteSpan message, const RingSignature& sig, const Zap& zap) {
  if (ring.empty()) return false;
  try {
    return zap.verify(smallest_member(ring).rho, rs_statement(ring, message, sig), sig.pi);
  } catch (const std::exception&) {
    return false;
  }
}

Bytes serialize(const RingSecretKey& sk) {
  ByteWriter w;
  w.magic("RSSK").u8(kVersion).u8(static_cast<std::uint8_t>(sk.scheme));
  w.blob(sk.sk).blob(sk.vk);
  write_lossy_pk(w, sk.pk);
  w.blob(sk.rho);
  return std::move(w).take();
}

RingSecretKey parse_ring_sk(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("RSSK");
  if (r.u8() != kVersion) throw FormatError("RSSK: unsupported version");
  RingSecretKey sk;
  const std::uint8_t tag = r.u8();
  if (tag != static_cast<std::uint8_t>(BaseScheme::kGpv) && tag != static_cast<std::uint8_t>(BaseScheme::kPlain)) {
    throw FormatError("RSSK: unknown base scheme");
  }
  sk.scheme = static_cast<BaseScheme>(tag);
  sk.sk = r.blob();
  sk.vk = r.blob();
  sk.pk = read_lossy_pk(r);
  sk.rho = r.blob();
  r.expect_done();
  return sk;
}

Bytes serialize(const RingSignature& sig) {
  ByteWriter w;
  w.magic("RSIG").u8(kVersion);
  write_lossy_ct(w, sig.c1);
  write_lossy_ct(w, sig.c2);
  w.blob(sig.pi);
  return std::move(w).take();
}

RingSignature parse_ring_signature(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("RSIG");
  if (r.u8() != kVersion) throw FormatError("RSIG: unsupported version");
  RingSignature sig;
  sig.c1 = read_lossy_ct(r);
  sig.c2 = read_lossy_ct(r);
  sig.pi = r.blob();
  r.expect_done();
  return sig;
}

}  // namespace blindlat
