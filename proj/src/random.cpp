// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/random.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "blindlat/hashing.hpp"

namespace blindlat {

struct RandomStream::Cipher {
  struct Free {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
  };
  std::unique_ptr<EVP_CIPHER_CTX, Free> ctx;
};

RandomStream::RandomStream(const Seed& seed) : cipher_(std::make_unique<Cipher>()) {
  cipher_->ctx.reset(EVP_CIPHER_CTX_new());
  std::array<std::uint8_t, 16> iv{};
  if (!cipher_->ctx ||
      EVP_EncryptInit_ex(cipher_->ctx.get(), EVP_chacha20(), nullptr, seed.data(), iv.data()) != 1) {
    throw std::runtime_error("chacha20 init failed");
  }
  refill();
}

RandomStream RandomStream::from_u64(std::uint64_t seed) {
  ByteWriter w;
  w.u64(seed);
  return derive("blindlat.seed", w.bytes());
}

RandomStream RandomStream::derive(std::string_view tag, ByteSpan data) {
  Seed s;
  Bytes h = hash_parts(tag, {data}, s.size());
  std::memcpy(s.data(), h.data(), s.size());
  return RandomStream(s);
}

RandomStream::RandomStream(RandomStream&&) noexcept = default;
RandomStream& RandomStream::operator=(RandomStream&&) noexcept = default;
RandomStream::~RandomStream() = default;

void RandomStream::refill() {
  static const std::array<std::uint8_t, 4096> kZeros{};
  int len = 0;
  if (EVP_EncryptUpdate(cipher_->ctx.get(), buffer_.data(), &len, kZeros.data(),
                        static_cast<int>(kZeros.size())) != 1 ||
      len != static_cast<int>(buffer_.size())) {
    throw std::runtime_error("chacha20 keystream failed");
  }
  pos_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (pos_ + 8 > buffer_.size()) refill();
  std::uint64_t v;
  std::memcpy(&v, buffer_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

std::uint64_t RandomStream::uniform(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform: zero bound");
  // Reject the top partial interval so every residue has equal weight.
  const std::uint64_t limit = bound * (std::numeric_limits<std::uint64_t>::max() / bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next_u64());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + uniform(span + 1));
}

double RandomStream::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

void RandomStream::fill(std::span<std::uint8_t> out) {
  for (std::size_t done = 0; done < out.size();) {
    if (pos_ == buffer_.size()) refill();
    std::size_t n = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

Bytes RandomStream::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

Seed RandomStream::seed() {
  Seed s;
  fill(s);
  return s;
}

}  // namespace blindlat
