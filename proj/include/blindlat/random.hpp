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

#ifndef BLINDLAT_RANDOM_HPP_
#define BLINDLAT_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>

#include "blindlat/bytes.hpp"

namespace blindlat {

using Seed = std::array<std::uint8_t, 32>;

// Deterministic random stream: the ChaCha20 keystream under a 32-byte seed.
// Satisfies UniformRandomBitGenerator so it plugs into <random> and
// std::shuffle. Move-only; fork() derives independent child streams.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(const Seed& seed);
  // Seed expanded from an integer via a domain-separated hash.
  static RandomStream from_u64(std::uint64_t seed);
  // Seed derived as H(tag, data).
  static RandomStream derive(std::string_view tag, ByteSpan data);

  RandomStream(RandomStream&&) noexcept;
  RandomStream& operator=(RandomStream&&) noexcept;
  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;
  ~RandomStream();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  // Uniform in [0, bound); bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform_real();
  bool bit() { return (next_u64() & 1) != 0; }
  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  Seed seed();
  RandomStream fork() { return RandomStream(seed()); }

 private:
  void refill();

  struct Cipher;
  std::unique_ptr<Cipher> cipher_;
  std::array<std::uint8_t, 4096> buffer_{};
  std::size_t pos_ = 0;
};

}  // namespace blindlat

#endif  // BLINDLAT_RANDOM_HPP_
