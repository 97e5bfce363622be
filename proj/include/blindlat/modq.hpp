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

// Dense linear algebra over Z_q and the gadget matrix G.

#ifndef BLINDLAT_MODQ_HPP_
#define BLINDLAT_MODQ_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>

#include "blindlat/bytes.hpp"
#include "blindlat/random.hpp"

namespace blindlat {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<std::int64_t>;
using IntVector = Vector<std::int64_t>;
using ResidueMatrix =
    Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);
// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

// A prime modulus 2 < q < 2^62.
class Modulus {
 public:
  explicit Modulus(std::uint64_t q);

  std::uint64_t value() const { return q_; }
  // Gadget width k: bit length of q - 1.
  unsigned bits() const { return bits_; }

  std::uint64_t reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;
  // Representative in (-q/2, q/2].
  std::int64_t centered(std::uint64_t r) const {
    return r > q_ / 2 ? static_cast<std::int64_t>(r) - static_cast<std::int64_t>(q_)
                      : static_cast<std::int64_t>(r);
  }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::uint64_t q_;
  unsigned bits_;
};

// Matrix over Z_q with every entry kept in [0, q).
class ModMatrix {
 public:
  // Empty 0 x 0 matrix over a placeholder modulus.
  ModMatrix() : ModMatrix(0, 0, Modulus(3)) {}
  ModMatrix(Index rows, Index cols, Modulus q);
  // Throws DimensionError on any entry >= q.
  ModMatrix(ResidueMatrix entries, Modulus q);

  template <class Derived>
  static ModMatrix from_ints(const Eigen::MatrixBase<Derived>& m, Modulus q) {
    ResidueMatrix r(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) r(i, j) = q.reduce(static_cast<std::int64_t>(m(i, j)));
    return ModMatrix(std::move(r), q, Unchecked{});
  }
  static ModMatrix identity(Index n, Modulus q);
  static ModMatrix uniform(Index rows, Index cols, Modulus q, RandomStream& rng);

  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  const Modulus& modulus() const { return q_; }
  std::uint64_t operator()(Index r, Index c) const { return m_(r, c); }
  void set(Index r, Index c, std::uint64_t v);
  const ResidueMatrix& residues() const { return m_; }

  // Centered integer lift.
  IntMatrix lift() const;
  ModMatrix block(Index r, Index c, Index h, Index w) const;
  ModMatrix col(Index j) const { return block(0, j, rows(), 1); }
  bool is_zero() const;

  friend bool operator==(const ModMatrix& a, const ModMatrix& b) {
    return a.q_ == b.q_ && a.rows() == b.rows() && a.cols() == b.cols() && a.m_ == b.m_;
  }

 private:
  struct Unchecked {};
  ModMatrix(ResidueMatrix entries, Modulus q, Unchecked) : m_(std::move(entries)), q_(q) {}
  friend ModMatrix mat_mul(const ModMatrix&, const ModMatrix&);
  friend ModMatrix operator+(const ModMatrix&, const ModMatrix&);
  friend ModMatrix operator-(const ModMatrix&, const ModMatrix&);
  friend ModMatrix operator-(const ModMatrix&);
  friend ModMatrix operator*(std::uint64_t, const ModMatrix&);
  friend ModMatrix hcat(const ModMatrix&, const ModMatrix&);
  friend ModMatrix vcat(const ModMatrix&, const ModMatrix&);

  ResidueMatrix m_;
  Modulus q_;
};

// (a * b) mod q. Throws DimensionError on shape or modulus mismatch.
ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);
// a times an integer matrix or vector, reduced mod q.
ModMatrix mat_mul(const ModMatrix& a, const IntMatrix& x);
ModMatrix mat_mul(const ModMatrix& a, const IntVector& x);

inline ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) { return mat_mul(a, b); }
inline ModMatrix operator*(const ModMatrix& a, const IntMatrix& x) { return mat_mul(a, x); }
inline ModMatrix operator*(const ModMatrix& a, const IntVector& x) { return mat_mul(a, x); }
ModMatrix operator+(const ModMatrix& a, const ModMatrix& b);
ModMatrix operator-(const ModMatrix& a, const ModMatrix& b);
ModMatrix operator-(const ModMatrix& a);
ModMatrix operator*(std::uint64_t c, const ModMatrix& a);
ModMatrix hcat(const ModMatrix& a, const ModMatrix& b);
ModMatrix vcat(const ModMatrix& a, const ModMatrix& b);

// G = I_n (x) (1, 2, ..., 2^{k-1}) with k = q.bits().
ModMatrix gadget(Index n, Modulus q);
// [G | 0] widened with zero columns to `width` >= n*k.
ModMatrix padded_gadget(Index n, Modulus q, Index width);
// Bit decomposition: entries in {0,1}, n*k rows, G * ginv = a.
ModMatrix ginv(Index n, Modulus q, const ModMatrix& a);
// Same as ginv, zero-padded to `width` rows to pair with padded_gadget.
IntMatrix ginv_bits(const ModMatrix& a, Index width);

// Largest column l2 norm.
template <class Derived>
double max_column_norm(const Eigen::MatrixBase<Derived>& m) {
  double best = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    best = std::max(best, m.col(j).template cast<double>().norm());
  }
  return best;
}

// Spectral norm by power iteration on m^T m.
template <class Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m, int max_iter = 200, double tol = 1e-9) {
  const Matrix<double> a = m.template cast<double>();
  if (a.size() == 0) throw ParameterError("operator_norm: empty matrix");
  Vector<double> v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 1.0 / static_cast<double>(i + 1);
  v.normalize();
  double est = 0;
  for (int it = 0; it < max_iter; ++it) {
    Vector<double> w = a.transpose() * (a * v);
    // Rayleigh quotient of a^T a at the unit vector v.
    double next = std::sqrt(std::max(0.0, v.dot(w)));
    double nw = w.norm();
    if (nw == 0) return 0;
    v = w / nw;
    if (std::abs(next - est) <= tol * next) return next;
    est = next;
  }
  return est;
}

struct Norms {
  double l2;       // vector norm, or largest column norm for matrices
  double op_norm;  // equals l2 for vectors
};
Norms norms(const IntVector& v);
Norms norms(const IntMatrix& m);
// Norms of the centered lift.
Norms norms(const ModMatrix& m);

std::int64_t rank(const ModMatrix& a);
// Some x with a * x = u, entries in [0, q); nullopt when u is outside the
// column span.
std::optional<IntVector> solve(const ModMatrix& a, const ModMatrix& u);

// MODQ block: magic, version, q, rows, cols, entries.
void write_mod_matrix(ByteWriter& w, const ModMatrix& m);
ModMatrix read_mod_matrix(ByteReader& r);
Bytes serialize(const ModMatrix& m);
ModMatrix parse_mod_matrix(ByteSpan data);

// IVEC block: magic, version, length, entries as i64.
void write_int_vector(ByteWriter& w, const IntVector& v);
IntVector read_int_vector(ByteReader& r);

// IMAT block: magic, version, rows, cols, column-major i64 entries.
void write_int_matrix(ByteWriter& w, const IntMatrix& m);
IntMatrix read_int_matrix(ByteReader& r);

}  // namespace blindlat

#endif  // BLINDLAT_MODQ_HPP_
