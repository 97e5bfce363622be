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

#ifndef BLINDLAT_HASHING_HPP_
#define BLINDLAT_HASHING_HPP_

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "blindlat/bytes.hpp"

namespace blindlat {

Bytes shake256(ByteSpan data, std::size_t out_len);

// SHAKE256 over tag and parts, each length-prefixed, so distinct part
// boundaries never collide.
Bytes hash_parts(std::string_view tag, std::initializer_list<ByteSpan> parts,
                 std::size_t out_len);

// HMAC-SHA256(key, tag || data).
Bytes keyed_hash(ByteSpan key, std::string_view tag, ByteSpan data);

// Reads an unbounded SHAKE256 output stream 64 bits at a time. OpenSSL 3.0
// only offers one-shot squeezing, so the output is regenerated at twice the
// length whenever it runs dry; SHAKE outputs are prefix-consistent.
class XofReader {
 public:
  XofReader(std::string_view tag, std::initializer_list<ByteSpan> parts);
  std::uint64_t next_u64();

 private:
  Bytes input_;
  Bytes out_;
  std::size_t pos_ = 0;
};

}  // namespace blindlat

#endif  // BLINDLAT_HASHING_HPP_
