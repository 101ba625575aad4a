#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dmod/scalar.hpp"

namespace dmod {

using ScalarVector = std::vector<Scalar>;
using SparseRow = std::vector<std::pair<std::uint32_t, Scalar>>;

/// Dense rows x cols matrix over one field.
class ScalarMatrix {
public:
  ScalarMatrix() = default;
  ScalarMatrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), entries_(rows * cols, Scalar(f)) {}
  /// Integer entries, convenient for tests and Omega matrices.
  ScalarMatrix(Field f, std::initializer_list<std::initializer_list<long>> rows);

  static ScalarMatrix identity(Field f, std::size_t n);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  ScalarMatrix transpose() const;
  ScalarMatrix operator*(const ScalarMatrix& o) const;
  ScalarVector operator*(const ScalarVector& v) const;
  bool operator==(const ScalarMatrix& o) const;

private:
  Field field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

/// Basis of { v : M v = 0 }; one vector per free column of the echelon form.
std::vector<ScalarVector> nullspace(const ScalarMatrix& m);

/// Some exact solution of M v = rhs (free variables set to zero), or nullopt
/// when the system is inconsistent.
std::optional<ScalarVector> solve_linear(const ScalarMatrix& m, const ScalarVector& rhs);

std::size_t rank(const ScalarMatrix& m);

/// Throws DivisionByZero if the matrix is singular.
ScalarMatrix inverse(const ScalarMatrix& m);

/// Field-dispatching incremental sparse echelon form. Rows may arrive in any
/// order; columns are pivoted leftmost-first.
class SparseKernel {
public:
  SparseKernel(Field f, std::uint32_t cols);
  ~SparseKernel();
  SparseKernel(SparseKernel&&) noexcept;
  SparseKernel& operator=(SparseKernel&&) noexcept;

  /// Entries sorted by column, zeros allowed (they are dropped).
  bool add_row(const SparseRow& row);
  std::size_t rank() const;
  std::uint32_t cols() const;
  std::vector<std::uint32_t> pivot_columns() const;
  std::vector<std::uint32_t> free_columns() const;
  ScalarVector kernel_vector(std::uint32_t free_col) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Rank of a sparse matrix after reduction modulo a prime. For rational
/// input this is a lower bound on the rational rank (equality when the rows
/// are independent mod p). Throws DivisionByZero if p divides a denominator.
std::size_t rank_mod_p(const std::vector<SparseRow>& rows, std::uint32_t cols, std::uint64_t p);

/// 2^61 - 1.
inline constexpr std::uint64_t kScreeningPrime = kMersenne61;

} // namespace dmod
