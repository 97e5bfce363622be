// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/lossype.hpp"

#include <cmath>
#include <cstdlib>

namespace blindlat {
namespace {

constexpr std::uint8_t kVersion = 1;
// Plaintext bits encrypted per matrix product.
constexpr Index kChunk = 16;

std::int64_t centered(std::uint64_t v, std::uint64_t q) {
  return v > q / 2 ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(q) : static_cast<std::int64_t>(v);
}

void write_params(ByteWriter& w, const LossyParams& p) {
  w.u32(static_cast<std::uint32_t>(p.n)).u32(static_cast<std::uint32_t>(p.mbar)).u64(p.q).u32(p.bound);
}

LossyParams read_params(ByteReader& r, const char* what) {
  LossyParams p;
  p.n = r.u32();
  p.mbar = r.u32();
  p.q = r.u64();
  p.bound = r.u32();
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
  return p;
}

void write_packed(ByteWriter& w, const ModMatrix& m) {
  BitWriter bits;
  const unsigned k = m.modulus().bits();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) bits.put(m(i, j), k);
  w.blob(std::move(bits).take());
}

ModMatrix read_packed(ByteReader& r, Index rows, Index cols, const Modulus& q, const char* what) {
  Bytes data = r.blob();
  if (data.size() != (static_cast<std::size_t>(rows * cols) * q.bits() + 7) / 8) {
    throw FormatError(std::string(what) + ": matrix size mismatch");
  }
  BitReader bits(data);
  ResidueMatrix e(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      e(i, j) = bits.get(q.bits());
      if (e(i, j) >= q.value()) throw FormatError(std::string(what) + ": entry not reduced");
    }
  bits.expect_done();
  return ModMatrix(std::move(e), q);
}

// R_j for the next `count` bits, side by side. Entries are +-1 as doubles
// so the product with A runs as one dense GEMM.
Matrix<double> next_randomness(Index mbar, Index count, RandomStream& rng) {
  Matrix<double> r(mbar, mbar * count);
  double* out = r.data();
  const Index size = r.size();
  for (Index i = 0; i < size; i += 64) {
    const std::uint64_t word = rng.next_u64();
    const Index len = std::min<Index>(64, size - i);
    for (Index b = 0; b < len; ++b) out[i + b] = static_cast<double>(static_cast<int>((word >> b) & 1) * 2 - 1);
  }
  return r;
}

}  // namespace

void LossyParams::validate() const {
  if (n < 1) throw ParameterError("lossy PKE: n must be positive");
  const Modulus m(q);
  if (mbar < (n + 1) * static_cast<Index>(m.bits())) {
    throw ParameterError("lossy PKE: mbar below the gadget width (n + 1) ceil(log2 q)");
  }
  if (bound >= q / 2) throw ParameterError("lossy PKE: error bound must be below q / 2");
  if (static_cast<double>(mbar) * static_cast<double>(q) >= 0x1p53) {
    throw ParameterError("lossy PKE: mbar q must stay below 2^53");
  }
}

unsigned LossyParams::decode_digit() const {
  const Modulus m(q);
  unsigned best = 0;
  std::int64_t best_mag = 0;
  for (unsigned i = 0; i < m.bits(); ++i) {
    const std::int64_t mag = std::abs(centered(m.pow(2, i), q));
    if (mag > best_mag) {
      best = i;
      best_mag = mag;
    }
  }
  return best;
}

std::uint64_t LossyParams::decode_threshold() const {
  return static_cast<std::uint64_t>(std::abs(centered(Modulus(q).pow(2, decode_digit()), q)));
}

bool LossyParams::decryption_exact() const {
  return 2 * static_cast<std::uint64_t>(mbar) * bound < decode_threshold();
}

bool LossyParams::lossy_hiding() const {
  return static_cast<double>(mbar) > static_cast<double>(n + 2) * std::log2(static_cast<double>(q)) + 64;
}

std::pair<std::vector<LossyPublicKey>, MasterSecretKey> msk_gen(const LossyParams& p, std::uint32_t count,
                                                               RandomStream& rng) {
  p.validate();
  if (count < 1) throw ParameterError("msk_gen: need at least one key");
  MasterSecretKey msk{p, {}, count};
  rng.fill(msk.prf_key);
  std::vector<LossyPublicKey> keys;
  keys.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) keys.push_back(msk_derive(msk, i).first);
  return {std::move(keys), msk};
}

std::pair<LossyPublicKey, LossySecretKey> msk_derive(const MasterSecretKey& msk, std::uint32_t index) {
  if (index >= msk.count) throw ParameterError("msk_derive: index out of range");
  const LossyParams& p = msk.params;
  const Modulus q = p.modulus();
  ByteWriter w;
  w.raw(msk.prf_key).u32(index);
  RandomStream rng = RandomStream::derive("blindlat.lossype.key", w.bytes());
  ModMatrix b = ModMatrix::uniform(p.n, p.mbar, q, rng);
  LossySecretKey sk{p, index, std::vector<std::uint64_t>(static_cast<std::size_t>(p.n))};
  ModMatrix s(1, p.n, q);
  for (Index i = 0; i < p.n; ++i) {
    sk.s[i] = rng.uniform(q.value());
    s.set(0, i, sk.s[i]);
  }
  ModMatrix e(1, p.mbar, q);
  const auto bound = static_cast<std::int64_t>(p.bound);
  for (Index j = 0; j < p.mbar; ++j) e.set(0, j, q.reduce(rng.uniform_int(-bound, bound)));
  return {LossyPublicKey{p, vcat(b, mat_mul(s, b) + e)}, std::move(sk)};
}

LossySecretKey msk_ext(const MasterSecretKey& msk, const LossyPublicKey& pk) {
  if (pk.params == msk.params) {
    for (std::uint32_t i = 0; i < msk.count; ++i) {
      auto [candidate, sk] = msk_derive(msk, i);
      if (candidate == pk) return sk;
    }
  }
  throw UnknownKey("msk_ext: key was not derived from this master key");
}

std::pair<LossyPublicKey, Bytes> ksam_lossy(const LossyParams& p, RandomStream& rng) {
  p.validate();
  LossyPublicKey pk{p, ModMatrix::uniform(p.n + 1, p.mbar, p.modulus(), rng)};
  Bytes coins = rnd_ext(pk);
  return {std::move(pk), std::move(coins)};
}

Bytes rnd_ext(const LossyPublicKey& pk) { return serialize(pk); }

LossyCiphertext le_enc(const LossyPublicKey& pk, std::span<const std::uint8_t> bits, ByteSpan seed) {
  const LossyParams& p = pk.params;
  const Modulus q = p.modulus();
  const Index len = static_cast<Index>(bits.size());
  const auto k = static_cast<Index>(q.bits());
  const Matrix<double> a = pk.a.residues().cast<double>();
  RandomStream rng = RandomStream::derive("blindlat.lossype.enc", seed);
  ResidueMatrix out(p.n + 1, p.mbar * len);
  for (Index start = 0; start < len; start += kChunk) {
    const Index count = std::min(kChunk, len - start);
    // Entries of the product stay below mbar q < 2^53.
    const Matrix<double> ar = a * next_randomness(p.mbar, count, rng);
    for (Index c = 0; c < ar.cols(); ++c)
      for (Index i = 0; i <= p.n; ++i) out(i, start * p.mbar + c) = q.reduce(static_cast<std::int64_t>(ar(i, c)));
    for (Index j = start; j < start + count; ++j) {
      if (!(bits[j] & 1)) continue;
      // Add G in place: row i carries 1, 2, ..., 2^{k-1} from column i k.
      for (Index i = 0; i <= p.n; ++i)
        for (Index l = 0; l < k; ++l) {
          std::uint64_t& e = out(i, j * p.mbar + i * k + l);
          e = q.add(e, std::uint64_t{1} << l);
        }
    }
  }
  return {p.mbar, ModMatrix(std::move(out), q)};
}

std::vector<std::int64_t> le_phase(const LossySecretKey& sk, const ModMatrix& block) {
  const Modulus& q = block.modulus();
  const auto n = static_cast<Index>(sk.s.size());
  if (block.rows() != n + 1) throw DimensionError("le_phase: block height differs from n + 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(block.cols()));
  for (Index c = 0; c < block.cols(); ++c) {
    std::uint64_t v = block(n, c);
    for (Index i = 0; i < n; ++i) v = q.sub(v, q.mul(sk.s[i], block(i, c)));
    out[c] = centered(v, q.value());
  }
  return out;
}

std::vector<std::uint8_t> le_dec(const LossySecretKey& sk, const LossyCiphertext& ct) {
  const LossyParams& p = sk.params;
  const Modulus q = p.modulus();
  if (ct.c.modulus() != q || ct.c.rows() != p.n + 1 || ct.mbar != p.mbar || ct.c.cols() % p.mbar != 0) {
    throw DimensionError("le_dec: ciphertext shape does not match the key");
  }
  const unsigned digit = p.decode_digit();
  const std::uint64_t g = q.pow(2, digit);
  const Index offset = p.n * static_cast<Index>(q.bits()) + digit;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(ct.bits()));
  for (Index j = 0; j < ct.bits(); ++j) {
    const std::int64_t v = le_phase(sk, ct.c.col(j * p.mbar + offset))[0];
    const std::int64_t shifted = centered(q.sub(q.reduce(v), g), q.value());
    bits[j] = std::abs(shifted) < std::abs(v);
  }
  return bits;
}

LossyCiphertext le_enc_bytes(const LossyPublicKey& pk, ByteSpan data, ByteSpan seed) {
  return le_enc(pk, to_bits(data), seed);
}

Bytes le_dec_bytes(const LossySecretKey& sk, const LossyCiphertext& ct) {
  if (ct.bits() % 8 != 0) throw DimensionError("le_dec_bytes: bit count is not a whole number of bytes");
  return from_bits(le_dec(sk, ct));
}

bool le_valid(const LossyPublicKey& pk, const LossySecretKey& sk) {
  const LossyParams& p = pk.params;
  if (!(sk.params == p) || static_cast<Index>(sk.s.size()) != p.n) return false;
  if (pk.a.rows() != p.n + 1 || pk.a.cols() != p.mbar) return false;
  for (std::uint64_t v : sk.s)
    if (v >= p.q) return false;
  for (std::int64_t e : le_phase(sk, pk.a))
    if (std::abs(e) > static_cast<std::int64_t>(p.bound)) return false;
  return true;
}

void write_lossy_pk(ByteWriter& w, const LossyPublicKey& pk) {
  w.magic("LEPK").u8(kVersion);
  write_params(w, pk.params);
  write_packed(w, pk.a);
}

LossyPublicKey read_lossy_pk(ByteReader& r) {
  r.expect_magic("LEPK");
  if (r.u8() != kVersion) throw FormatError("LEPK: unsupported version");
  LossyParams p = read_params(r, "LEPK");
  ModMatrix a = read_packed(r, p.n + 1, p.mbar, p.modulus(), "LEPK");
  return {p, std::move(a)};
}

Bytes serialize(const LossyPublicKey& pk) {
  ByteWriter w;
  write_lossy_pk(w, pk);
  return std::move(w).take();
}

LossyPublicKey parse_lossy_pk(ByteSpan data) {
  ByteReader r(data);
  LossyPublicKey pk = read_lossy_pk(r);
  r.expect_done();
  return pk;
}

void write_lossy_ct(ByteWriter& w, const LossyCiphertext& ct) {
  w.magic("LECT").u8(kVersion).u64(ct.c.modulus().value());
  w.u32(static_cast<std::uint32_t>(ct.c.rows())).u32(static_cast<std::uint32_t>(ct.mbar));
  w.u32(static_cast<std::uint32_t>(ct.bits()));
  write_packed(w, ct.c);
}

LossyCiphertext read_lossy_ct(ByteReader& r) {
  r.expect_magic("LECT");
  if (r.u8() != kVersion) throw FormatError("LECT: unsupported version");
  const std::uint64_t qv = r.u64();
  const Index rows = r.u32(), mbar = r.u32(), bits = r.u32();
  if (rows < 2 || mbar < 1) throw FormatError("LECT: bad shape");
  if (static_cast<std::uint64_t>(rows) * mbar * bits > std::uint64_t{8} * r.remaining()) {
    throw FormatError("LECT: truncated");
  }
  Modulus q = [&] {
    try {
      return Modulus(qv);
    } catch (const ParameterError& e) {
      throw FormatError(std::string("LECT: ") + e.what());
    }
  }();
  return {mbar, read_packed(r, rows, mbar * bits, q, "LECT")};
}

Bytes serialize(const LossyCiphertext& ct) {
  ByteWriter w;
  write_lossy_ct(w, ct);
  return std::move(w).take();
}

LossyCiphertext parse_lossy_ct(ByteSpan data) {
  ByteReader r(data);
  LossyCiphertext ct = read_lossy_ct(r);
  r.expect_done();
  return ct;
}

Bytes serialize(const MasterSecretKey& msk) {
  ByteWriter w;
  w.magic("LEMS").u8(kVersion);
  write_params(w, msk.params);
  w.raw(msk.prf_key).u32(msk.count);
  return std::move(w).take();
}

MasterSecretKey parse_msk(ByteSpan data) {
  ByteReader r(data);
  r.expect_magic("LEMS");
  if (r.u8() != kVersion) throw FormatError("LEMS: unsupported version");
  MasterSecretKey msk;
  msk.params = read_params(r, "LEMS");
  ByteSpan key = r.raw(32);
  std::copy(key.begin(), key.end(), msk.prf_key.begin());
  msk.count = r.u32();
  if (msk.count < 1) throw FormatError("LEMS: empty key set");
  r.expect_done();
  return msk;
}

}  // namespace blindlat
