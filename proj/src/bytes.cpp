// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/bytes.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace blindlat {

std::string to_hex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError("invalid hex digit");
  };
  if (hex.size() % 2 != 0) throw FormatError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

ByteWriter& ByteWriter::magic(std::string_view tag) { return raw(as_bytes(tag)); }

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

ByteWriter& ByteWriter::f64(double v) { return u64(std::bit_cast<std::uint64_t>(v)); }

ByteWriter& ByteWriter::raw(ByteSpan data) {
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

ByteWriter& ByteWriter::blob(ByteSpan data) {
  if (data.size() > UINT32_MAX) throw ParameterError("blob too large");
  u32(static_cast<std::uint32_t>(data.size()));
  return raw(data);
}

void ByteReader::expect_magic(std::string_view tag) {
  ByteSpan got = raw(tag.size());
  if (std::memcmp(got.data(), tag.data(), tag.size()) != 0) {
    throw FormatError("bad magic: expected " + std::string(tag));
  }
}

ByteSpan ByteReader::raw(std::size_t n) {
  if (n > remaining()) throw FormatError("truncated input");
  ByteSpan s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  ByteSpan s = raw(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(s[i]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  ByteSpan s = raw(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(s[i]) << (8 * i);
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

Bytes ByteReader::blob() {
  std::uint32_t n = u32();
  ByteSpan s = raw(n);
  return Bytes(s.begin(), s.end());
}

void ByteReader::expect_done() const {
  if (!done()) throw FormatError("trailing bytes");
}

BitWriter& BitWriter::put(std::uint64_t v, unsigned width) {
  if (width < 64) v &= (std::uint64_t{1} << width) - 1;
  while (width > 0) {
    const unsigned used = bits_ % 8;
    if (used == 0) out_.push_back(0);
    const unsigned take = std::min(width, 8 - used);
    out_.back() |= static_cast<std::uint8_t>((v & ((1u << take) - 1)) << used);
    v >>= take;
    width -= take;
    bits_ += take;
  }
  return *this;
}

std::uint64_t BitReader::get(unsigned width) {
  if (width > remaining_bits()) throw FormatError("bit field past end of data");
  std::uint64_t v = 0;
  unsigned done = 0;
  while (done < width) {
    const unsigned used = pos_ % 8;
    const unsigned take = std::min(width - done, 8 - used);
    v |= static_cast<std::uint64_t>((data_[pos_ / 8] >> used) & ((1u << take) - 1)) << done;
    done += take;
    pos_ += take;
  }
  return v;
}

void BitReader::expect_done() const {
  if (remaining_bits() >= 8) throw FormatError("trailing bytes");
  if (pos_ % 8 != 0 && (data_.back() >> (pos_ % 8)) != 0) throw FormatError("nonzero padding bits");
}

std::vector<std::uint8_t> to_bits(ByteSpan data) {
  std::vector<std::uint8_t> bits(data.size() * 8);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (data[i / 8] >> (i % 8)) & 1;
  return bits;
}

Bytes from_bits(std::span<const std::uint8_t> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

}  // namespace blindlat
