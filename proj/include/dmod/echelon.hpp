#pragma once

// Incremental sparse row echelon form over an exact field. Rows are reduced
// as they arrive; pivot rows are kept monic but not mutually reduced, which is
// enough for rank, pivot profiles and back-substituted kernel vectors.

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <utility>
#include <vector>

#include "dmod/budget.hpp"
#include "dmod/scalar.hpp"

namespace dmod::detail {

struct RationalArith {
  using T = mpq_class;
  static bool is_zero(const T& a) { return sgn(a) == 0; }
  T one() const { return 1; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  T inv(const T& a) const { return 1 / a; }
  // a - f * b
  T sub_mul(const T& a, const T& f, const T& b) const { return a - f * b; }
  T from_scalar(const Scalar& s) const { return s.rational_value(); }
  Scalar to_scalar(const T& a) const { return Scalar(Field::rationals(), a); }
};

struct ModArith {
  using T = std::uint64_t;
  std::uint64_t p;
  static bool is_zero(const T& a) { return a == 0; }
  T one() const { return 1; }
  T mul(const T& a, const T& b) const { return mul_mod(a, b, p); }
  T neg(const T& a) const { return a == 0 ? 0 : p - a; }
  T inv(const T& a) const { return inv_mod(a, p); }
  T sub_mul(const T& a, const T& f, const T& b) const {
    T fb = mul_mod(f, b, p);
    return a >= fb ? a - fb : a + p - fb;
  }
  T from_scalar(const Scalar& s) const {
    return s.field().is_rational() ? reduce_mod(s.rational_value(), p) : s.residue() % p;
  }
  Scalar to_scalar(const T& a) const { return Scalar(Field{p}, static_cast<long>(a)); }
};

template <class Arith>
class Echelon {
public:
  using T = typename Arith::T;
  using Row = std::vector<std::pair<std::uint32_t, T>>;

  Echelon(Arith arith, std::uint32_t cols) : arith_(std::move(arith)), cols_(cols) {}

  std::uint32_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }
  const std::map<std::uint32_t, Row>& pivots() const { return pivots_; }

  /// Row entries must be sorted by column and nonzero. Returns true if the
  /// row was independent of the rows seen so far.
  bool add_row(Row row) {
    Row scratch;
    while (!row.empty()) {
      auto it = pivots_.find(row.front().first);
      if (it == pivots_.end()) {
        T scale = arith_.inv(row.front().second);
        for (auto& [c, v] : row) v = arith_.mul(v, scale);
        pivots_.emplace(row.front().first, std::move(row));
        return true;
      }
      const Row& piv = it->second;
      WorkBudget::charge(piv.size());
      T factor = row.front().second;
      scratch.clear();
      scratch.reserve(row.size() + piv.size());
      std::size_t i = 1, j = 1;
      while (i < row.size() || j < piv.size()) {
        if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.push_back(std::move(row[i++]));
        } else if (i == row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, arith_.sub_mul(T{}, factor, piv[j].second));
          ++j;
        } else {
          T v = arith_.sub_mul(row[i].second, factor, piv[j].second);
          if (!Arith::is_zero(v)) scratch.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      std::swap(row, scratch);
    }
    return false;
  }

  std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < cols_; ++c) {
      if (!pivots_.count(c)) out.push_back(c);
    }
    return out;
  }

  /// Kernel vector with a 1 at `free_col` and zeros at every other free
  /// column.
  std::vector<T> kernel_vector(std::uint32_t free_col) const {
    std::vector<T> x(cols_);
    std::vector<bool> nonzero(cols_, false);
    x[free_col] = arith_.one();
    nonzero[free_col] = true;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      const auto& [c, row] = *it;
      if (c > free_col) continue;
      T acc{};
      bool any = false;
      for (std::size_t k = 1; k < row.size(); ++k) {
        auto col = row[k].first;
        if (!nonzero[col]) continue;
        acc = arith_.sub_mul(acc, row[k].second, x[col]);
        any = true;
      }
      if (any && !Arith::is_zero(acc)) {
        x[c] = acc;
        nonzero[c] = true;
      }
    }
    return x;
  }

private:
  Arith arith_;
  std::uint32_t cols_;
  std::map<std::uint32_t, Row> pivots_;
};

} // namespace dmod::detail
