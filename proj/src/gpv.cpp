// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/gpv.hpp"

#include <cmath>
#include <limits>

#include "blindlat/hashing.hpp"

namespace blindlat {
namespace {

constexpr std::uint8_t kVersion = 1;
enum class Kind : std::uint8_t { kPublicKey = 1, kSecretKey = 2, kSignature = 3 };
constexpr int kResampleLimit = 100;

void write_params(ByteWriter& w, const PsfParams& p) {
  w.u32(static_cast<std::uint32_t>(p.n)).u32(static_cast<std::uint32_t>(p.m));
  w.u64(p.q.value()).f64(p.s);
}

PsfParams read_params(ByteReader& r) {
  Index n = r.u32(), m = r.u32();
  std::uint64_t q = r.u64();
  double s = r.f64();
  if (n < 1 || m < 1 || !(s > 0) || !std::isfinite(s)) throw FormatError("GPVS: bad parameters");
  try {
    return {n, m, Modulus(q), s};
  } catch (const ParameterError& e) {
    throw FormatError(std::string("GPVS: ") + e.what());
  }
}

ByteReader open(ByteSpan data, Kind kind) {
  ByteReader r(data);
  r.expect_magic("GPVS");
  if (r.u8() != kVersion) throw FormatError("GPVS: unsupported version");
  if (r.u8() != static_cast<std::uint8_t>(kind)) throw FormatError("GPVS: unexpected object kind");
  return r;
}

ByteWriter start(Kind kind) {
  ByteWriter w;
  w.magic("GPVS").u8(kVersion).u8(static_cast<std::uint8_t>(kind));
  return w;
}

}  // namespace

double psf_width(const ShortBasis& t_a) {
  return std::ceil(64.0 * t_a.gram_schmidt_norm() * smoothing_factor(t_a.dim())) / 64.0;
}

PsfKeyPair psf_gen(Index n, const Modulus& q, Index m, RandomStream& rng) {
  TrapdoorKeyPair kp = trap_gen(n, q, m, rng);
  const double s = psf_width(kp.t_a);
  return {std::move(kp.a), std::move(kp.t_a), PsfParams{n, m, q, s}};
}

ModMatrix psf_f(const ModMatrix& pk, const PsfParams& params, const IntVector& x) {
  if (x.size() != params.m) throw ParameterError("psf_f: input length differs from m");
  if (x.cast<double>().norm() > params.domain_radius()) throw ParameterError("psf_f: input outside domain");
  return mat_mul(pk, x);
}

IntVector psf_samp(const PsfParams& params, RandomStream& rng) {
  const IntegerGaussian z{GaussParams(params.s)};
  IntVector x(params.m);
  do {
    for (Index i = 0; i < params.m; ++i) x(i) = z.sample(rng);
  } while (x.cast<double>().norm() > params.domain_radius());
  return x;
}

IntVector psf_invf(const PsfKeyPair& kp, const ModMatrix& y, ByteSpan r) {
  for (std::uint32_t attempt = 0; attempt < kResampleLimit; ++attempt) {
    ByteWriter w;
    w.raw(r).u32(attempt);
    RandomStream rng = RandomStream::derive("blindlat.gpv.invf", w.bytes());
    IntVector x = sample_pre(kp.pk, kp.sk, y, kp.params.s, rng);
    if (x.cast<double>().norm() <= kp.params.domain_radius()) return x;
  }
  throw std::runtime_error("psf_invf: resample limit exceeded");
}

GpvKeys gpv_gen(const GpvConfig& config, RandomStream& rng) {
  Modulus q(config.q);
  const Index m = config.m > 0 ? config.m : trap_gen_min_m(config.n, q);
  PsfKeyPair psf = psf_gen(config.n, q, m, rng);
  return {std::move(psf), rng.bytes(32)};
}

ModMatrix gpv_hash(const PsfParams& params, ByteSpan message) {
  ByteWriter w;
  w.u64(params.q.value()).u32(static_cast<std::uint32_t>(params.n));
  XofReader xof("blindlat.gpv.H", {w.bytes(), message});
  const std::uint64_t q = params.q.value();
  const std::uint64_t limit = q * (std::numeric_limits<std::uint64_t>::max() / q);
  ModMatrix h(params.n, 1, params.q);
  for (Index i = 0; i < params.n;) {
    std::uint64_t v = xof.next_u64();
    if (v >= limit) continue;
    h.set(i++, 0, v % q);
  }
  return h;
}

GpvSignature gpv_sign(const GpvKeys& keys, ByteSpan message) {
  Bytes r = keyed_hash(keys.prf_key, "blindlat.gpv.prf", message);
  return {psf_invf(keys.psf, gpv_hash(keys.psf.params, message), r)};
}

bool gpv_verify(const GpvPublicKey& pk, ByteSpan message, const GpvSignature& sig) {
  if (sig.sigma.size() != pk.params.m) return false;
  if (sig.sigma.cast<double>().norm() > pk.params.domain_radius()) return false;
  return mat_mul(pk.a, sig.sigma) == gpv_hash(pk.params, message);
}

Bytes serialize(const GpvPublicKey& pk) {
  ByteWriter w = start(Kind::kPublicKey);
  write_params(w, pk.params);
  write_mod_matrix(w, pk.a);
  return std::move(w).take();
}

Bytes serialize(const GpvKeys& keys) {
  ByteWriter w = start(Kind::kSecretKey);
  write_params(w, keys.psf.params);
  write_mod_matrix(w, keys.psf.pk);
  write_int_matrix(w, keys.psf.sk.basis());
  w.blob(keys.prf_key);
  return std::move(w).take();
}

Bytes serialize(const GpvSignature& sig) {
  ByteWriter w = start(Kind::kSignature);
  write_int_vector(w, sig.sigma);
  return std::move(w).take();
}

GpvPublicKey parse_gpv_public_key(ByteSpan data) {
  ByteReader r = open(data, Kind::kPublicKey);
  PsfParams p = read_params(r);
  ModMatrix a = read_mod_matrix(r);
  r.expect_done();
  if (a.rows() != p.n || a.cols() != p.m || a.modulus() != p.q) throw FormatError("GPVS: key shape");
  return {std::move(a), p};
}

GpvKeys parse_gpv_keys(ByteSpan data) {
  ByteReader r = open(data, Kind::kSecretKey);
  PsfParams p = read_params(r);
  ModMatrix a = read_mod_matrix(r);
  IntMatrix t = read_int_matrix(r);
  Bytes k = r.blob();
  r.expect_done();
  if (a.rows() != p.n || a.cols() != p.m || a.modulus() != p.q) throw FormatError("GPVS: key shape");
  if (t.rows() != p.m || t.cols() != p.m) throw FormatError("GPVS: basis shape");
  if (k.size() != 32) throw FormatError("GPVS: prf key must be 32 bytes");
  if (!mat_mul(a, t).is_zero()) throw FormatError("GPVS: basis does not match key");
  try {
    return {PsfKeyPair{std::move(a), ShortBasis(std::move(t)), p}, std::move(k)};
  } catch (const SingularBasis&) {
    throw FormatError("GPVS: singular basis");
  }
}

GpvSignature parse_gpv_signature(ByteSpan data) {
  ByteReader r = open(data, Kind::kSignature);
  IntVector v = read_int_vector(r);
  r.expect_done();
  return {std::move(v)};
}

}  // namespace blindlat
