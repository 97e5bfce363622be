// Copyright 2026 The blindlat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLINDLAT_BYTES_HPP_
#define BLINDLAT_BYTES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blindlat {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Error raised when a serialized artifact is truncated, carries the wrong
// magic, or fails a structural check.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes or moduli do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter is outside the range an operation supports.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline ByteSpan as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

// Little-endian append-only encoder.
class ByteWriter {
 public:
  ByteWriter& magic(std::string_view tag);
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  ByteWriter& f64(double v);
  ByteWriter& raw(ByteSpan data);
  // u32 length followed by the bytes.
  ByteWriter& blob(ByteSpan data);

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked decoder over a borrowed buffer.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  // Throws FormatError unless the next bytes equal `tag`.
  void expect_magic(std::string_view tag);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  ByteSpan raw(std::size_t n);
  Bytes blob();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  // Throws FormatError if bytes are left over.
  void expect_done() const;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

// Little-endian bit packing for fixed-width fields.
class BitWriter {
 public:
  // Appends the low `width` bits of v; width <= 64.
  BitWriter& put(std::uint64_t v, unsigned width);
  BitWriter& bit(bool b) { return put(b ? 1 : 0, 1); }
  std::size_t bit_count() const { return bits_; }
  // Zero-padded to a whole byte.
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(ByteSpan data) : data_(data) {}
  // Throws FormatError past the end.
  std::uint64_t get(unsigned width);
  bool bit() { return get(1) != 0; }
  std::size_t remaining_bits() const { return data_.size() * 8 - pos_; }
  // Throws FormatError unless only zero padding is left.
  void expect_done() const;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

// Bits of the bytes, least significant first.
std::vector<std::uint8_t> to_bits(ByteSpan data);
Bytes from_bits(std::span<const std::uint8_t> bits);

}  // namespace blindlat

#endif  // BLINDLAT_BYTES_HPP_
