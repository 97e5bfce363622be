// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/zapcore.hpp"

#include <algorithm>

namespace blindlat {
namespace {

constexpr std::uint8_t kVersion = 1;

BaseScheme read_scheme(ByteReader& r, const char* what) {
  const std::uint8_t tag = r.u8();
  if (tag != static_cast<std::uint8_t>(BaseScheme::kGpv) && tag != static_cast<std::uint8_t>(BaseScheme::kPlain)) {
    throw FormatError(std::string(what) + ": unknown base scheme");
  }
  return static_cast<BaseScheme>(tag);
}

}  // namespace

void write_ring_vk(ByteWriter& w, const RingVerificationKey& vk) {
  w.magic("RSVK").u8(kVersion).u8(static_cast<std::uint8_t>(vk.scheme));
  w.blob(vk.vk);
  write_lossy_pk(w, vk.pk);
  w.blob(vk.rho);
}

RingVerificationKey read_ring_vk(ByteReader& r) {
  r.expect_magic("RSVK");
  if (r.u8() != kVersion) throw FormatError("RSVK: unsupported version");
  RingVerificationKey vk;
  vk.scheme = read_scheme(r, "RSVK");
  vk.vk = r.blob();
  vk.pk = read_lossy_pk(r);
  vk.rho = r.blob();
  return vk;
}

Bytes serialize(const RingVerificationKey& vk) {
  ByteWriter w;
  write_ring_vk(w, vk);
  return std::move(w).take();
}

RingVerificationKey parse_ring_vk(ByteSpan data) {
  ByteReader r(data);
  RingVerificationKey vk = read_ring_vk(r);
  r.expect_done();
  return vk;
}

Bytes canonical_ring(const Ring& ring) {
  std::vector<Bytes> members;
  members.reserve(ring.size());
  for (const auto& vk : ring) members.push_back(serialize(vk));
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(members.size()));
  for (const auto& m : members) w.blob(m);
  return std::move(w).take();
}

const RingVerificationKey& smallest_member(const Ring& ring) {
  if (ring.empty()) throw ParameterError("smallest_member: empty ring");
  std::size_t best = 0;
  Bytes best_bytes = serialize(ring[0]);
  for (std::size_t i = 1; i < ring.size(); ++i) {
    Bytes b = serialize(ring[i]);
    if (b < best_bytes) {
      best = i;
      best_bytes = std::move(b);
    }
  }
  return ring[best];
}

Bytes ring_message(const Ring& ring, ByteSpan message) {
  ByteWriter w;
  w.raw(canonical_ring(ring)).raw(message);
  return std::move(w).take();
}

Bytes encode_payload(ByteSpan sigma, ByteSpan vk) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(sigma.size())).raw(sigma).raw(vk);
  return std::move(w).take();
}

std::optional<std::pair<Bytes, Bytes>> decode_payload(ByteSpan payload) {
  if (payload.size() < 4) return std::nullopt;
  ByteReader r(payload);
  const std::uint32_t len = r.u32();
  if (len > r.remaining()) return std::nullopt;
  ByteSpan sigma = r.raw(len);
  ByteSpan vk = r.raw(r.remaining());
  return std::pair{Bytes(sigma.begin(), sigma.end()), Bytes(vk.begin(), vk.end())};
}

Bytes serialize(const Statement& x) {
  ByteWriter w;
  w.magic("RSTM").u8(kVersion).u32(static_cast<std::uint32_t>(x.ring.size()));
  for (const auto& vk : x.ring) write_ring_vk(w, vk);
  w.blob(x.message);
  write_lossy_ct(w, x.c1);
  write_lossy_ct(w, x.c2);
  return std::move(w).take();
}

Statement parse_statement(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("RSTM");
  if (r.u8() != kVersion) throw FormatError("RSTM: unsupported version");
  Statement x;
  const std::uint32_t count = r.u32();
  if (count == 0 || count > r.remaining()) throw FormatError("RSTM: bad ring size");
  for (std::uint32_t i = 0; i < count; ++i) x.ring.push_back(read_ring_vk(r));
  x.message = r.blob();
  x.c1 = read_lossy_ct(r);
  x.c2 = read_lossy_ct(r);
  r.expect_done();
  return x;
}

Bytes serialize(const Witness& w) {
  ByteWriter out;
  out.magic("RSWT").u8(kVersion).u8(static_cast<std::uint8_t>(w.scheme));
  out.blob(w.vk);
  write_lossy_pk(out, w.pk);
  out.blob(w.sigma).blob(w.r_c);
  return std::move(out).take();
}

Witness parse_witness(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("RSWT");
  if (r.u8() != kVersion) throw FormatError("RSWT: unsupported version");
  Witness w;
  w.scheme = read_scheme(r, "RSWT");
  w.vk = r.blob();
  w.pk = read_lossy_pk(r);
  w.sigma = r.blob();
  w.r_c = r.blob();
  r.expect_done();
  return w;
}

bool rel_r1(const Ring& ring, const Witness& w) {
  return std::any_of(ring.begin(), ring.end(), [&](const RingVerificationKey& vk) {
    return vk.scheme == w.scheme && vk.vk == w.vk && vk.pk == w.pk;
  });
}

bool rel_r2(const LossyCiphertext& c, const Witness& w) {
  const Bytes payload = encode_payload(w.sigma, w.vk);
  if (c.bits() != static_cast<Index>(8 * payload.size())) return false;
  return serialize(le_enc_bytes(w.pk, payload, w.r_c)) == serialize(c);
}

bool rel_r3(const Ring& ring, ByteSpan message, const Witness& w) {
  return base_verify(w.scheme, w.vk, ring_message(ring, message), w.sigma);
}

bool rel_r_prime(const Ring& ring, ByteSpan message, const LossyCiphertext& c, const Witness& w) {
  return rel_r1(ring, w) && rel_r3(ring, message, w) && rel_r2(c, w);
}

bool in_l(const Statement& x, const Witness& w, int which) {
  if (which != 1 && which != 2) throw ParameterError("in_l: block must be 1 or 2");
  return rel_r_prime(x.ring, x.message, which == 1 ? x.c1 : x.c2, w);
}

bool rel_r4(const Ring& ring, const NonWitness& nw) {
  return std::all_of(ring.begin(), ring.end(), [&](const RingVerificationKey& vk) {
    try {
      return le_valid(vk.pk, msk_ext(nw.msk, vk.pk));
    } catch (const UnknownKey&) {
      return false;
    }
  });
}

bool rel_r5(const Ring& ring, ByteSpan message, const LossyCiphertext& c, const NonWitness& nw) {
  const Bytes signed_bytes = ring_message(ring, message);
  for (const auto& member : ring) {
    LossySecretKey sk;
    try {
      sk = msk_ext(nw.msk, member.pk);
    } catch (const UnknownKey&) {
      continue;
    }
    if (c.c.rows() != sk.params.n + 1 || c.mbar != sk.params.mbar || c.c.modulus().value() != sk.params.q ||
        c.bits() % 8 != 0) {
      continue;
    }
    auto payload = decode_payload(le_dec_bytes(sk, c));
    if (!payload) continue;
    const auto& [sigma, vk] = *payload;
    if (vk == member.vk && base_verify(member.scheme, vk, signed_bytes, sigma)) return true;
  }
  return false;
}

bool in_l_tilde(const Statement& x, const NonWitness& nw) {
  return rel_r4(x.ring, nw) && !rel_r5(x.ring, x.message, x.c1, nw) && !rel_r5(x.ring, x.message, x.c2, nw);
}

Bytes StubZap::first_message(RandomStream& rng) const { return rng.bytes(params_.rho_bytes); }

Bytes StubZap::prove(ByteSpan rho, const Statement& x, const Witness& w, ByteSpan) const {
  if (rho.size() != params_.rho_bytes) throw ZapContractError("zap prove: first message has the wrong length");
  int which = 0;
  if (in_l(x, w, 1)) {
    which = 1;
  } else if (in_l(x, w, 2)) {
    which = 2;
  } else {
    throw ZapContractError("zap prove: witness does not satisfy the relation");
  }
  ByteWriter out;
  out.magic("ZSTB").u8(kVersion).u8(static_cast<std::uint8_t>(which)).blob(serialize(w));
  return std::move(out).take();
}

std::pair<int, Witness> StubZap::open(ByteSpan pi) {
  ByteReader r(pi);
  r.expect_magic("ZSTB");
  if (r.u8() != kVersion) throw FormatError("ZSTB: unsupported version");
  const int which = r.u8();
  if (which != 1 && which != 2) throw FormatError("ZSTB: bad block index");
  Witness w = parse_witness(r.blob());
  r.expect_done();
  return {which, std::move(w)};
}

bool StubZap::verify(ByteSpan rho, const Statement& x, ByteSpan pi) const {
  if (rho.size() != params_.rho_bytes) return false;
  try {
    auto [which, w] = open(pi);
    return in_l(x, w, which);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace blindlat
