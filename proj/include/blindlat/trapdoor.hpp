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

// Trapdoor generation and coset preimage sampling.

#ifndef BLINDLAT_TRAPDOOR_HPP_
#define BLINDLAT_TRAPDOOR_HPP_

#include "blindlat/gauss.hpp"
#include "blindlat/modq.hpp"

namespace blindlat {

// Observed ratio |T~_A| / sqrt(n log2 q) stays below this for every
// supported (n, q, m); enforced by trap_gen.
inline constexpr double kTrapGenConstant = 8.0;

struct TrapdoorKeyPair {
  ModMatrix a;       // n x m
  ShortBasis t_a;    // basis of the kernel lattice of a
};

// ceil(2 n log2 q) + 2n.
Index trap_gen_min_m(Index n, const Modulus& q);

// A = [Abar | Abar*Rbar + G] with Rbar uniform in {-1,1}. Throws
// ParameterError when m < trap_gen_min_m.
TrapdoorKeyPair trap_gen(Index n, const Modulus& q, Index m, RandomStream& rng);

// Basis of the kernel lattice of G: one k x k block per row, columns
// 2e_i - e_{i+1} followed by the binary digits of q.
ShortBasis gadget_basis(Index n, const Modulus& q);
// Kernel basis of padded_gadget(n, q, width): blockdiag(T_G, I).
ShortBasis padded_gadget_basis(Index n, const Modulus& q, Index width);

// x with a*x = u, distributed as the discrete Gaussian of width s over that
// coset. u is a column.
IntVector sample_pre(const ModMatrix& a, const ShortBasis& t_a, const ModMatrix& u, double s,
                     RandomStream& rng);
inline IntVector sample_pre(const TrapdoorKeyPair& kp, const ModMatrix& u, double s, RandomStream& rng) {
  return sample_pre(kp.a, kp.t_a, u, s, rng);
}

// d with [a | b] d = u using only the basis of a.
IntVector sample_left(const ModMatrix& a, const ModMatrix& b, const ShortBasis& t_a,
                      const ModMatrix& u, double s, RandomStream& rng);

// Basis of the kernel lattice of [a | a r + b], built from r and a basis of
// the kernel lattice of b.
ShortBasis right_basis(const ModMatrix& a, const ModMatrix& b, const IntMatrix& r,
                       const ShortBasis& t_b);

// d with [a | a r + b] d = u using only r and the basis of b.
IntVector sample_right(const ModMatrix& a, const ModMatrix& b, const IntMatrix& r,
                       const ShortBasis& t_b, const ModMatrix& u, double s, RandomStream& rng);

}  // namespace blindlat

#endif  // BLINDLAT_TRAPDOOR_HPP_
