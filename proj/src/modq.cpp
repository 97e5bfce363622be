// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/modq.hpp"

#include <bit>
#include <string>

namespace blindlat {
namespace {

constexpr std::uint8_t kModqVersion = 1;
constexpr std::uint8_t kIvecVersion = 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

void require_same(const ModMatrix& a, const ModMatrix& b, const char* what) {
  if (a.modulus() != b.modulus()) throw DimensionError(std::string(what) + ": modulus mismatch");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch");
  }
}

// Exact product through double GEMM when every partial sum stays below 2^53.
bool fits_double(double max_a, double max_b, Index inner) {
  return max_a * max_b * static_cast<double>(inner) < 0x1p52;
}

// Entries of p are exact integers below 2^53 in magnitude.
ResidueMatrix reduce_double(const Matrix<double>& p, const Modulus& q) {
  ResidueMatrix r(p.rows(), p.cols());
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j) r(i, j) = q.reduce(static_cast<std::int64_t>(p(i, j)));
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

Modulus::Modulus(std::uint64_t q) : q_(q), bits_(static_cast<unsigned>(std::bit_width(q - 1))) {
  if (q <= 2 || q >= (std::uint64_t{1} << 62)) {
    throw ParameterError("modulus out of range (2, 2^62): " + std::to_string(q));
  }
  if (!is_prime(q)) throw ParameterError("modulus is not prime: " + std::to_string(q));
}

std::uint64_t Modulus::pow(std::uint64_t a, std::uint64_t e) const { return powmod(a, e, q_); }

std::uint64_t Modulus::inv(std::uint64_t a) const {
  if (a % q_ == 0) throw ParameterError("inverse of zero");
  return powmod(a, q_ - 2, q_);
}

ModMatrix::ModMatrix(Index rows, Index cols, Modulus q)
    : m_(ResidueMatrix::Zero(rows, cols)), q_(q) {}

ModMatrix::ModMatrix(ResidueMatrix entries, Modulus q) : m_(std::move(entries)), q_(q) {
  if (m_.size() > 0 && m_.maxCoeff() >= q_.value()) throw DimensionError("entry not reduced mod q");
}

ModMatrix ModMatrix::identity(Index n, Modulus q) {
  return ModMatrix(ResidueMatrix::Identity(n, n), q, Unchecked{});
}

ModMatrix ModMatrix::uniform(Index rows, Index cols, Modulus q, RandomStream& rng) {
  ResidueMatrix r(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) r(i, j) = rng.uniform(q.value());
  return ModMatrix(std::move(r), q, Unchecked{});
}

void ModMatrix::set(Index r, Index c, std::uint64_t v) {
  if (v >= q_.value()) throw DimensionError("entry not reduced mod q");
  m_(r, c) = v;
}

IntMatrix ModMatrix::lift() const {
  IntMatrix out(rows(), cols());
  for (Index i = 0; i < rows(); ++i)
    for (Index j = 0; j < cols(); ++j) out(i, j) = q_.centered(m_(i, j));
  return out;
}

ModMatrix ModMatrix::block(Index r, Index c, Index h, Index w) const {
  if (r < 0 || c < 0 || r + h > rows() || c + w > cols()) throw DimensionError("block out of range");
  return ModMatrix(m_.block(r, c, h, w), q_, Unchecked{});
}

bool ModMatrix::is_zero() const { return m_.size() == 0 || m_.maxCoeff() == 0; }

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.modulus() != b.modulus()) throw DimensionError("mat_mul: modulus mismatch");
  if (a.cols() != b.rows()) throw DimensionError("mat_mul: inner dimension mismatch");
  const Modulus& q = a.modulus();
  const Index n = a.rows(), k = a.cols(), m = b.cols();
  const double qm = static_cast<double>(q.value() - 1);
  if (fits_double(qm, qm, k)) {
    Matrix<double> p = a.m_.cast<double>() * b.m_.cast<double>();
    return ModMatrix(reduce_double(p, q), q, ModMatrix::Unchecked{});
  }
  // Each product is below 2^124, so sixteen of them fit in 128 bits.
  ResidueMatrix out(n, m);
  std::vector<unsigned __int128> acc(static_cast<std::size_t>(m));
  for (Index i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    int pending = 0;
    for (Index t = 0; t < k; ++t) {
      const std::uint64_t av = a.m_(i, t);
      if (av == 0) continue;
      const std::uint64_t* brow = b.m_.data() + t * m;
      for (Index j = 0; j < m; ++j) acc[j] += static_cast<unsigned __int128>(av) * brow[j];
      if (++pending == 15) {
        for (auto& x : acc) x %= q.value();
        pending = 0;
      }
    }
    for (Index j = 0; j < m; ++j) out(i, j) = static_cast<std::uint64_t>(acc[j] % q.value());
  }
  return ModMatrix(std::move(out), q, ModMatrix::Unchecked{});
}

ModMatrix mat_mul(const ModMatrix& a, const IntMatrix& x) {
  if (a.cols() != x.rows()) throw DimensionError("mat_mul: inner dimension mismatch");
  const Modulus& q = a.modulus();
  const double xmax = x.size() ? static_cast<double>(x.cwiseAbs().maxCoeff()) : 0.0;
  const Index inner = std::max<Index>(a.cols(), 1);
  if (fits_double(static_cast<double>(q.value() - 1), xmax, inner)) {
    Matrix<double> p = a.residues().cast<double>() * x.cast<double>();
    return ModMatrix(reduce_double(p, q), q);
  }
  // Split a into limbs narrow enough that each limb product is exact in
  // double, then recombine mod q.
  const double budget = 0x1p52 / (std::max(xmax, 1.0) * static_cast<double>(inner));
  const int limb = static_cast<int>(std::floor(std::log2(budget)));
  if (limb >= 8) {
    const Matrix<double> xd = x.cast<double>();
    const std::uint64_t mask = (std::uint64_t{1} << limb) - 1;
    ResidueMatrix acc = ResidueMatrix::Zero(a.rows(), x.cols());
    std::uint64_t scale = 1;
    for (int shift = 0; shift < 64; shift += limb) {
      Matrix<double> part(a.rows(), a.cols());
      bool any = false;
      for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
          const std::uint64_t v = (a(i, j) >> shift) & mask;
          part(i, j) = static_cast<double>(v);
          any |= v != 0;
        }
      if (any) {
        ResidueMatrix r = reduce_double(part * xd, q);
        for (Index i = 0; i < acc.size(); ++i) {
          acc.data()[i] = q.add(acc.data()[i], q.mul(r.data()[i], scale));
        }
      }
      scale = q.mul(scale, (std::uint64_t{1} << limb) % q.value());
    }
    return ModMatrix(std::move(acc), q);
  }
  return mat_mul(a, ModMatrix::from_ints(x, q));
}

ModMatrix mat_mul(const ModMatrix& a, const IntVector& x) {
  return mat_mul(a, IntMatrix(x));
}

ModMatrix operator+(const ModMatrix& a, const ModMatrix& b) {
  require_same(a, b, "add");
  ResidueMatrix r(a.rows(), a.cols());
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = a.q_.add(a.m_.data()[i], b.m_.data()[i]);
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix operator-(const ModMatrix& a, const ModMatrix& b) {
  require_same(a, b, "sub");
  ResidueMatrix r(a.rows(), a.cols());
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = a.q_.sub(a.m_.data()[i], b.m_.data()[i]);
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix operator-(const ModMatrix& a) {
  ResidueMatrix r(a.rows(), a.cols());
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = a.q_.neg(a.m_.data()[i]);
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix operator*(std::uint64_t c, const ModMatrix& a) {
  c %= a.q_.value();
  ResidueMatrix r(a.rows(), a.cols());
  for (Index i = 0; i < r.size(); ++i) r.data()[i] = a.q_.mul(c, a.m_.data()[i]);
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix hcat(const ModMatrix& a, const ModMatrix& b) {
  if (a.modulus() != b.modulus() || a.rows() != b.rows()) throw DimensionError("hcat mismatch");
  ResidueMatrix r(a.rows(), a.cols() + b.cols());
  r << a.m_, b.m_;
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix vcat(const ModMatrix& a, const ModMatrix& b) {
  if (a.modulus() != b.modulus() || a.cols() != b.cols()) throw DimensionError("vcat mismatch");
  ResidueMatrix r(a.rows() + b.rows(), a.cols());
  r << a.m_, b.m_;
  return ModMatrix(std::move(r), a.q_, ModMatrix::Unchecked{});
}

ModMatrix gadget(Index n, Modulus q) { return padded_gadget(n, q, n * q.bits()); }

ModMatrix padded_gadget(Index n, Modulus q, Index width) {
  const Index k = q.bits();
  if (n < 1) throw ParameterError("gadget: n must be positive");
  if (width < n * k) throw ParameterError("gadget: width below n*k");
  ModMatrix g(n, width, q);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) g.set(i, i * k + j, std::uint64_t{1} << j);
  return g;
}

IntMatrix ginv_bits(const ModMatrix& a, Index width) {
  const Index n = a.rows(), k = a.modulus().bits();
  if (width < n * k) throw DimensionError("ginv: width below n*k");
  IntMatrix out = IntMatrix::Zero(width, a.cols());
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < a.cols(); ++c) {
      std::uint64_t v = a(i, c);
      for (Index j = 0; j < k; ++j) out(i * k + j, c) = static_cast<std::int64_t>((v >> j) & 1);
    }
  return out;
}

ModMatrix ginv(Index n, Modulus q, const ModMatrix& a) {
  if (a.rows() != n) throw DimensionError("ginv: row count differs from n");
  if (a.modulus() != q) throw DimensionError("ginv: modulus mismatch");
  return ModMatrix::from_ints(ginv_bits(a, n * q.bits()), q);
}

Norms norms(const IntVector& v) {
  if (v.size() == 0) throw ParameterError("norms: empty vector");
  double l2 = v.cast<double>().norm();
  return {l2, l2};
}

Norms norms(const IntMatrix& m) {
  if (m.size() == 0) throw ParameterError("norms: empty matrix");
  return {max_column_norm(m), operator_norm(m)};
}

Norms norms(const ModMatrix& m) { return norms(m.lift()); }

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<Index> echelon(ResidueMatrix& e, const Modulus& q, Index ncols) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index c = 0; c < ncols && row < e.rows(); ++c) {
    Index p = row;
    while (p < e.rows() && e(p, c) == 0) ++p;
    if (p == e.rows()) continue;
    e.row(p).swap(e.row(row));
    const std::uint64_t inv = q.inv(e(row, c));
    for (Index j = 0; j < e.cols(); ++j) e(row, j) = q.mul(e(row, j), inv);
    for (Index r = 0; r < e.rows(); ++r) {
      if (r == row || e(r, c) == 0) continue;
      const std::uint64_t f = e(r, c);
      for (Index j = 0; j < e.cols(); ++j) e(r, j) = q.sub(e(r, j), q.mul(f, e(row, j)));
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::int64_t rank(const ModMatrix& a) {
  ResidueMatrix e = a.residues();
  return static_cast<std::int64_t>(echelon(e, a.modulus(), a.cols()).size());
}

std::optional<IntVector> solve(const ModMatrix& a, const ModMatrix& u) {
  if (u.rows() != a.rows() || u.cols() != 1) throw DimensionError("solve: u must be a column");
  if (a.modulus() != u.modulus()) throw DimensionError("solve: modulus mismatch");
  const Modulus& q = a.modulus();
  ResidueMatrix e(a.rows(), a.cols() + 1);
  e << a.residues(), u.residues();
  std::vector<Index> pivots = echelon(e, q, a.cols());
  for (Index r = static_cast<Index>(pivots.size()); r < e.rows(); ++r) {
    if (e(r, a.cols()) != 0) return std::nullopt;
  }
  IntVector x = IntVector::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    x(pivots[r]) = static_cast<std::int64_t>(e(static_cast<Index>(r), a.cols()));
  }
  return x;
}

void write_mod_matrix(ByteWriter& w, const ModMatrix& m) {
  w.magic("MODQ").u8(kModqVersion).u64(m.modulus().value());
  w.u32(static_cast<std::uint32_t>(m.rows())).u32(static_cast<std::uint32_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) w.u64(m(i, j));
}

ModMatrix read_mod_matrix(ByteReader& r) {
  r.expect_magic("MODQ");
  if (r.u8() != kModqVersion) throw FormatError("MODQ: unsupported version");
  std::uint64_t qv = r.u64();
  std::uint32_t rows = r.u32(), cols = r.u32();
  if (static_cast<std::uint64_t>(rows) * cols * 8 > r.remaining()) throw FormatError("MODQ: truncated");
  Modulus q = [&] {
    try {
      return Modulus(qv);
    } catch (const ParameterError& e) {
      throw FormatError(std::string("MODQ: ") + e.what());
    }
  }();
  ResidueMatrix e(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      e(i, j) = r.u64();
      if (e(i, j) >= qv) throw FormatError("MODQ: entry not reduced");
    }
  return ModMatrix(std::move(e), q);
}

Bytes serialize(const ModMatrix& m) {
  ByteWriter w;
  write_mod_matrix(w, m);
  return std::move(w).take();
}

ModMatrix parse_mod_matrix(ByteSpan data) {
  ByteReader r(data);
  ModMatrix m = read_mod_matrix(r);
  r.expect_done();
  return m;
}

void write_int_vector(ByteWriter& w, const IntVector& v) {
  w.magic("IVEC").u8(kIvecVersion).u32(static_cast<std::uint32_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) w.i64(v(i));
}

IntVector read_int_vector(ByteReader& r) {
  r.expect_magic("IVEC");
  if (r.u8() != kIvecVersion) throw FormatError("IVEC: unsupported version");
  std::uint32_t n = r.u32();
  if (static_cast<std::uint64_t>(n) * 8 > r.remaining()) throw FormatError("IVEC: truncated");
  IntVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = r.i64();
  return v;
}

void write_int_matrix(ByteWriter& w, const IntMatrix& m) {
  w.magic("IMAT").u8(kIvecVersion).u32(static_cast<std::uint32_t>(m.rows()));
  w.u32(static_cast<std::uint32_t>(m.cols()));
  for (Index i = 0; i < m.size(); ++i) w.i64(m.data()[i]);
}

IntMatrix read_int_matrix(ByteReader& r) {
  r.expect_magic("IMAT");
  if (r.u8() != kIvecVersion) throw FormatError("IMAT: unsupported version");
  std::uint32_t rows = r.u32(), cols = r.u32();
  if (static_cast<std::uint64_t>(rows) * cols * 8 > r.remaining()) throw FormatError("IMAT: truncated");
  IntMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = r.i64();
  return m;
}

}  // namespace blindlat
