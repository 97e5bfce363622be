// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/hashing.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace blindlat {
namespace {

Bytes encode_parts(std::string_view tag, std::initializer_list<ByteSpan> parts) {
  ByteWriter w;
  w.blob(as_bytes(tag));
  for (ByteSpan p : parts) w.blob(p);
  return std::move(w).take();
}

}  // namespace

Bytes shake256(ByteSpan data, std::size_t out_len) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  Bytes out(out_len);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw std::runtime_error("shake256 failed");
  }
  return out;
}

Bytes hash_parts(std::string_view tag, std::initializer_list<ByteSpan> parts,
                 std::size_t out_len) {
  return shake256(encode_parts(tag, parts), out_len);
}

Bytes keyed_hash(ByteSpan key, std::string_view tag, ByteSpan data) {
  Bytes msg = encode_parts(tag, {data});
  Bytes out(32);
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw std::runtime_error("hmac failed");
  }
  return out;
}

XofReader::XofReader(std::string_view tag, std::initializer_list<ByteSpan> parts)
    : input_(encode_parts(tag, parts)) {
  out_ = shake256(input_, 256);
}

std::uint64_t XofReader::next_u64() {
  if (pos_ + 8 > out_.size()) out_ = shake256(input_, out_.size() * 2);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(out_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

}  // namespace blindlat
