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

// Preimage-sampleable functions and the derandomized hash-and-sign
// signature built on them.

#ifndef BLINDLAT_GPV_HPP_
#define BLINDLAT_GPV_HPP_

#include <optional>

#include "blindlat/trapdoor.hpp"

namespace blindlat {

struct PsfParams {
  Index n;
  Index m;
  Modulus q;
  double s;

  // s * sqrt(m): radius of the function domain.
  double domain_radius() const { return s * std::sqrt(static_cast<double>(m)); }
  friend bool operator==(const PsfParams&, const PsfParams&) = default;
};

// Width for a key: |T~_A| * smoothing_factor(m), rounded up to 1/64.
double psf_width(const ShortBasis& t_a);

struct PsfKeyPair {
  ModMatrix pk;
  ShortBasis sk;
  PsfParams params;
};

PsfKeyPair psf_gen(Index n, const Modulus& q, Index m, RandomStream& rng);

// A x mod q. Throws ParameterError outside the domain.
ModMatrix psf_f(const ModMatrix& pk, const PsfParams& params, const IntVector& x);
// Centered Gaussian of width s, redrawn until it lies in the domain.
IntVector psf_samp(const PsfParams& params, RandomStream& rng);
// Preimage of y, a deterministic function of (sk, y, r).
IntVector psf_invf(const PsfKeyPair& kp, const ModMatrix& y, ByteSpan r);

struct GpvPublicKey {
  ModMatrix a;
  PsfParams params;
};

struct GpvKeys {
  PsfKeyPair psf;
  Bytes prf_key;  // 32 bytes

  GpvPublicKey public_key() const { return {psf.pk, psf.params}; }
};

struct GpvSignature {
  IntVector sigma;
  friend bool operator==(const GpvSignature& a, const GpvSignature& b) { return a.sigma == b.sigma; }
};

struct GpvConfig {
  Index n = 4;
  std::uint64_t q = 12289;
  Index m = 0;  // 0 selects trap_gen_min_m
};

GpvKeys gpv_gen(const GpvConfig& config, RandomStream& rng);
// H(m) in Z_q^n: 64-bit XOF chunks, rejecting those >= q*floor(2^64/q).
ModMatrix gpv_hash(const PsfParams& params, ByteSpan message);
GpvSignature gpv_sign(const GpvKeys& keys, ByteSpan message);
bool gpv_verify(const GpvPublicKey& pk, ByteSpan message, const GpvSignature& sig);

// GPVS containers.
Bytes serialize(const GpvPublicKey& pk);
Bytes serialize(const GpvKeys& keys);
Bytes serialize(const GpvSignature& sig);
GpvPublicKey parse_gpv_public_key(ByteSpan data);
GpvKeys parse_gpv_keys(ByteSpan data);
GpvSignature parse_gpv_signature(ByteSpan data);

}  // namespace blindlat

#endif  // BLINDLAT_GPV_HPP_
