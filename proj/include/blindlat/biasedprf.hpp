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

// A single-bit keyed function that outputs 1 with probability epsilon,
// described as a NAND circuit over key bits followed by message bits.
//
// The mixing layer is a keyed multiplexer network. It has the bias and the
// shallow NAND form the signature scheme needs; it is not a cryptographic PRF.

#ifndef BLINDLAT_BIASEDPRF_HPP_
#define BLINDLAT_BIASEDPRF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "blindlat/homeval.hpp"
#include "blindlat/random.hpp"

namespace blindlat {

// A probability num/den with den <= 2^16.
struct Epsilon {
  std::uint32_t num = 0;
  std::uint32_t den = 1;

  Epsilon() = default;
  Epsilon(std::uint32_t num, std::uint32_t den);
  // Nearest multiple of 2^-16.
  static Epsilon from_double(double e);
  double value() const { return static_cast<double>(num) / den; }
  // ceil(epsilon * 2^16), in [0, 2^16].
  std::uint32_t threshold() const;
  friend bool operator==(const Epsilon&, const Epsilon&) = default;
};

inline constexpr int kDerivedBits = 16;
// Key bits: one (bit, complement) pair per derived bit.
inline constexpr Index kPrfKeyBits = 2 * kDerivedBits;
// prf_circuit depth stays below this times log2(key bits + message bits).
inline constexpr double kPrfDepthConstant = 4.0;

// Circuit over kPrfKeyBits key inputs followed by t message inputs. It
// depends only on (epsilon, t).
NandCircuit prf_circuit(const Epsilon& epsilon, Index t);

struct BiasedPrfKey {
  std::vector<std::uint8_t> key_bits;
  Epsilon epsilon;
  Index t = 0;
  NandCircuit circuit{1};
  double depth_constant = kPrfDepthConstant;
};

BiasedPrfKey prf_gen(const Epsilon& epsilon, Index t, RandomStream& rng);
// Throws DimensionError unless |x| = t.
bool prf_eval(const BiasedPrfKey& key, std::span<const std::uint8_t> x);

// BPRF block: magic, version, t, epsilon, key bits, circuit text.
Bytes serialize(const BiasedPrfKey& key);
BiasedPrfKey parse_prf_key(ByteSpan data);

}  // namespace blindlat

#endif  // BLINDLAT_BIASEDPRF_HPP_
