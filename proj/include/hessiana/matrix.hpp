#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hessiana/field.hpp"

namespace hessiana {

template <class F>
using Vec = std::vector<typename F::value_type>;

/// Row-compressed sparse matrix over an exact field. Rows keep their entries
/// sorted by column and never store zeros.
template <class F>
class SparseMatrix {
 public:
  using value_type = typename F::value_type;

  struct Entry {
    std::uint32_t col;
    value_type value;
  };
  struct Triplet {
    std::size_t row;
    std::size_t col;
    value_type value;
  };

  SparseMatrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), cols_(cols), rows_(rows) {}

  /// Duplicate (row, col) pairs are summed; zero sums are dropped.
  static SparseMatrix from_triplets(F field, std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    SparseMatrix m(std::move(field), rows, cols);
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 0; i < triplets.size();) {
      const auto& t = triplets[i];
      if (t.row >= rows || t.col >= cols) throw ContractError("triplet outside matrix bounds");
      value_type sum = t.value;
      std::size_t j = i + 1;
      for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j)
        sum = m.field_.add(sum, triplets[j].value);
      if (!m.field_.is_zero(sum)) m.rows_[t.row].push_back({static_cast<std::uint32_t>(t.col), std::move(sum)});
      i = j;
    }
    return m;
  }

  static SparseMatrix from_dense(F field, std::size_t rows, std::size_t cols, std::span<const value_type> data) {
    SparseMatrix m(std::move(field), rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (!m.field_.is_zero(data[r * cols + c]))
          m.rows_[r].push_back({static_cast<std::uint32_t>(c), data[r * cols + c]});
    return m;
  }

  static SparseMatrix identity(F field, std::size_t n) {
    SparseMatrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].push_back({static_cast<std::uint32_t>(i), m.field_.one()});
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::span<const Entry> row(std::size_t r) const { return rows_[r]; }

  /// Replaces a row; entries must be sorted, in range, nonzero and in the field.
  void set_row(std::size_t r, std::vector<Entry> entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].col >= cols_ || (i > 0 && entries[i - 1].col >= entries[i].col))
        throw ContractError("row entries must be sorted and in range");
      if (field_.is_zero(entries[i].value) || !field_.contains(entries[i].value))
        throw ContractError("row entries must be nonzero field elements");
    }
    rows_[r] = std::move(entries);
  }

  void append_row(std::vector<Entry> entries) {
    rows_.emplace_back();
    set_row(rows_.size() - 1, std::move(entries));
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  value_type at(std::size_t r, std::size_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.col < col; });
    return (it != row.end() && it->col == c) ? it->value : field_.zero();
  }

  SparseMatrix transpose() const {
    SparseMatrix t(field_, cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& e : rows_[r]) t.rows_[e.col].push_back({static_cast<std::uint32_t>(r), e.value});
    return t;
  }

  Vec<F> multiply(std::span<const value_type> x) const {
    if (x.size() != cols_) throw ContractError("matrix-vector dimension mismatch");
    Vec<F> y(rows(), field_.zero());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& e : rows_[r]) y[r] = field_.mul_add(e.value, x[e.col], y[r]);
    return y;
  }

  std::vector<value_type> to_dense() const {
    std::vector<value_type> d(rows() * cols_, field_.zero());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& e : rows_[r]) d[r * cols_ + e.col] = e.value;
    return d;
  }

 private:
  F field_;
  std::size_t cols_;
  std::vector<std::vector<Entry>> rows_;
};

template <class F>
struct RankNullspace {
  std::size_t rank = 0;
  std::vector<Vec<F>> basis;
};

/// Sparse elimination modulo p with Markowitz-style pivoting (sparsest column,
/// then sparsest row; ties by lowest index).
RankNullspace<PrimeField> rank_nullspace(const SparseMatrix<PrimeField>& m);
std::size_t rank(const SparseMatrix<PrimeField>& m);

/// Fraction-free (Bareiss) elimination over the integers after clearing
/// row denominators.
RankNullspace<RationalField> rank_nullspace(const SparseMatrix<RationalField>& m);
std::size_t rank(const SparseMatrix<RationalField>& m);

/// Some x with m*x = b, or nullopt when b is outside the column space.
std::optional<Vec<PrimeField>> solve_linear(const SparseMatrix<PrimeField>& m, std::span<const std::uint64_t> b);
std::optional<Vec<RationalField>> solve_linear(const SparseMatrix<RationalField>& m, std::span<const mpq_class> b);

/// In-place reduced row echelon form of a list of dense vectors; zero rows are
/// removed and pivots are lexicographically first. Returns pivot columns.
template <class F>
std::vector<std::size_t> rref(const F& field, std::vector<Vec<F>>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && field.is_zero(rows[p][c])) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    auto inv = field.inv(rows[rank][c]);
    for (auto& v : rows[rank]) v = field.mul(v, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || field.is_zero(rows[r][c])) continue;
      auto factor = field.neg(rows[r][c]);
      for (std::size_t k = c; k < cols; ++k)
        if (!field.is_zero(rows[rank][k])) rows[r][k] = field.mul_add(factor, rows[rank][k], rows[r][k]);
    }
    pivots.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  return pivots;
}

/// Rank of a small dense matrix given row-major.
template <class F>
std::size_t dense_rank(const F& field, std::size_t rows, std::size_t cols, std::vector<typename F::value_type> a) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && field.is_zero(a[p * cols + c])) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a[p * cols + k], a[rank * cols + k]);
    auto inv = field.inv(a[rank * cols + c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (field.is_zero(a[r * cols + c])) continue;
      auto factor = field.neg(field.mul(a[r * cols + c], inv));
      for (std::size_t k = c; k < cols; ++k)
        a[r * cols + k] = field.mul_add(factor, a[rank * cols + k], a[r * cols + k]);
    }
    ++rank;
  }
  return rank;
}

/// Dense row-major matrix modulo p, used for large evaluation systems and as
/// an elimination path independent of the sparse solver.
struct DenseModMatrix {
  PrimeField field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> data;

  DenseModMatrix(PrimeField f, std::size_t r, std::size_t c) : field(f), rows(r), cols(c), data(r * c, 0) {}
  std::uint64_t& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint64_t operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Dense Gauss-Jordan elimination. Parallel over rows, capped by the
/// HESSIANA_THREADS environment variable; results do not depend on the
/// thread count.
RankNullspace<PrimeField> dense_rank_nullspace(DenseModMatrix m);
std::size_t dense_rank(DenseModMatrix m);

/// Number of worker threads allowed for internal parallel loops.
unsigned worker_threads();

/// Ranks of an integer/rational matrix at several primes. The certified value
/// is the maximum; `agree` is false when primes disagree.
struct ModularRankCertificate {
  std::vector<std::uint64_t> primes;
  std::vector<std::size_t> ranks;
  std::size_t value = 0;
  bool agree = true;
};
ModularRankCertificate modular_rank(const SparseMatrix<RationalField>& m, std::span<const std::uint64_t> primes);

SparseMatrix<PrimeField> reduce_mod(const SparseMatrix<RationalField>& m, const PrimeField& field);

/// Rational number r/s with r = s*residue mod modulus and |r|, |s| <= sqrt(modulus/2).
std::optional<mpq_class> rational_reconstruct(const mpz_class& residue, const mpz_class& modulus);

/// Combine two residue vectors by CRT and reconstruct rationals entrywise.
std::optional<std::vector<mpq_class>> reconstruct_from_two_primes(std::span<const std::uint64_t> a, std::uint64_t p,
                                                                  std::span<const std::uint64_t> b, std::uint64_t q);

}  // namespace hessiana
