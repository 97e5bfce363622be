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

// NAND circuits, width-5 branching programs and key-homomorphic evaluation
// of circuits on matrix encodings A_i = A R_i + x_i G.

#ifndef BLINDLAT_HOMEVAL_HPP_
#define BLINDLAT_HOMEVAL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blindlat/modq.hpp"

namespace blindlat {

using Wire = std::uint32_t;

// Wires 0..num_inputs-1 are inputs; gate g drives wire num_inputs + g and
// may only read lower-numbered wires.
class NandCircuit {
 public:
  struct Gate {
    Wire left, right;
    friend bool operator==(const Gate&, const Gate&) = default;
  };

  explicit NandCircuit(Index num_inputs);

  Wire add_nand(Wire u, Wire v);
  Wire add_not(Wire u) { return add_nand(u, u); }
  void set_output(Wire w);

  Index num_inputs() const { return inputs_; }
  Index num_wires() const { return inputs_ + static_cast<Index>(gates_.size()); }
  const std::vector<Gate>& gates() const { return gates_; }
  Wire output() const { return output_; }
  // Longest input-to-output path, counted in gates.
  int depth() const { return depth_of(output_); }
  int depth_of(Wire w) const { return depth_[w]; }

  bool evaluate(std::span<const std::uint8_t> x) const;
  // Value of every wire.
  std::vector<std::uint8_t> evaluate_all(std::span<const std::uint8_t> x) const;

  // Copy with gates that do not reach the output removed.
  NandCircuit pruned() const;

  // "inputs L", then "NAND u v" per gate, then "output w".
  std::string to_text() const;
  // Strict parse; throws FormatError.
  static NandCircuit parse(std::string_view text);

  friend bool operator==(const NandCircuit& a, const NandCircuit& b) {
    return a.inputs_ == b.inputs_ && a.gates_ == b.gates_ && a.output_ == b.output_;
  }

 private:
  Index inputs_;
  std::vector<Gate> gates_;
  std::vector<int> depth_;
  Wire output_ = 0;
};

using Perm = std::array<std::uint8_t, 5>;

inline constexpr Perm kIdentityPerm{0, 1, 2, 3, 4};
// (1 2 3 4 5) and (1 3 5 4 2), zero-indexed.
inline constexpr Perm kSigma{1, 2, 3, 4, 0};
inline constexpr Perm kTau{2, 0, 4, 1, 3};

// (a then b)(i) = b[a[i]].
Perm then(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
bool is_five_cycle(const Perm& p);

struct BpStep {
  std::uint32_t var;
  Perm if0, if1;
  bool constant() const { return if0 == if1; }
};

// Starting from state 0 each step maps state s to if_x[s] with x the value
// of input `var`. The program accepts when it ends in accept[0] and rejects
// when it ends back in 0.
struct BranchingProgram {
  Index num_inputs = 0;
  std::vector<BpStep> steps;
  Perm accept = kSigma;

  Index length() const { return static_cast<Index>(steps.size()); }
  Index active_steps() const;
  // Throws std::logic_error if the program ends outside {0, accept[0]}.
  bool evaluate(std::span<const std::uint8_t> x) const;
};

inline constexpr int kMaxBarringtonDepth = 14;

// Program of length exactly 4^depth. NAND(u, u) costs no extra length.
// Throws ParameterError when depth > kMaxBarringtonDepth.
BranchingProgram barrington(const NandCircuit& c);

// A_i = A R_i + x_i G with G padded to the width of A. The secret side
// (R_i, x_i) is only present for the party that built the encoding.
struct EncodedBit {
  struct Secret {
    IntMatrix r;
    bool x;
  };
  ModMatrix matrix;
  std::optional<Secret> secret;

  static EncodedBit encode(const ModMatrix& public_a, IntMatrix r, bool x);
  static EncodedBit public_only(ModMatrix m) { return {std::move(m), std::nullopt}; }
  bool has_secret() const { return secret.has_value(); }
};

// A_w = G - A_u G^{-1}(A_v), R_w = -R_u G^{-1}(A_v) - x_u R_v.
EncodedBit eval_nand_gate(const EncodedBit& u, const EncodedBit& v, const ModMatrix& public_a);

// Gate-by-gate evaluation; reference route for eval_bv.
EncodedBit eval_gates(const NandCircuit& c, std::span<const EncodedBit> encodings,
                      const ModMatrix& public_a);

// Evaluation through the Barrington program. The secret side is carried
// only when every encoding has one.
EncodedBit eval_bv(const NandCircuit& c, std::span<const EncodedBit> encodings,
                   const ModMatrix& public_a);
EncodedBit eval_bv(const BranchingProgram& bp, std::span<const EncodedBit> encodings,
                   const ModMatrix& public_a);

// Exact spectral norm via SVD.
double spectral_norm(const IntMatrix& m);

}  // namespace blindlat

#endif  // BLINDLAT_HOMEVAL_HPP_
