#include "dmod/linalg.hpp"

#include <variant>

#include "dmod/echelon.hpp"

namespace dmod {

using detail::Echelon;
using detail::ModArith;
using detail::RationalArith;

ScalarMatrix::ScalarMatrix(Field f, std::initializer_list<std::initializer_list<long>> rows)
    : field_(f), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ragged matrix literal");
    for (long v : r) entries_.emplace_back(f, v);
  }
}

ScalarMatrix ScalarMatrix::identity(Field f, std::size_t n) {
  ScalarMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(f, 1);
  return m;
}

ScalarMatrix ScalarMatrix::transpose() const {
  ScalarMatrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

ScalarMatrix ScalarMatrix::operator*(const ScalarMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidArgument("matrix shapes do not conform");
  ScalarMatrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    }
  return r;
}

ScalarVector ScalarMatrix::operator*(const ScalarVector& v) const {
  if (cols_ != v.size()) throw InvalidArgument("vector length does not match columns");
  ScalarVector r(rows_, Scalar(field_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) r[i] += at(i, k) * v[k];
  return r;
}

bool ScalarMatrix::operator==(const ScalarMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

struct SparseKernel::Impl {
  Field field;
  std::variant<Echelon<RationalArith>, Echelon<ModArith>> ech;

  Impl(Field f, std::uint32_t cols)
      : field(f),
        ech(f.is_rational() ? decltype(ech)(Echelon<RationalArith>(RationalArith{}, cols))
                            : decltype(ech)(Echelon<ModArith>(ModArith{f.p}, cols))) {}
};

SparseKernel::SparseKernel(Field f, std::uint32_t cols) : impl_(std::make_unique<Impl>(f, cols)) {}
SparseKernel::~SparseKernel() = default;
SparseKernel::SparseKernel(SparseKernel&&) noexcept = default;
SparseKernel& SparseKernel::operator=(SparseKernel&&) noexcept = default;

bool SparseKernel::add_row(const SparseRow& row) {
  return std::visit(
      [&](auto& e) {
        using E = std::decay_t<decltype(e)>;
        typename E::Row r;
        r.reserve(row.size());
        if constexpr (std::is_same_v<E, Echelon<RationalArith>>) {
          for (const auto& [c, v] : row) {
            if (!v.is_zero()) r.emplace_back(c, v.rational_value());
          }
        } else {
          for (const auto& [c, v] : row) {
            if (!v.is_zero()) r.emplace_back(c, v.residue());
          }
        }
        return e.add_row(std::move(r));
      },
      impl_->ech);
}

std::size_t SparseKernel::rank() const {
  return std::visit([](const auto& e) { return e.rank(); }, impl_->ech);
}

std::uint32_t SparseKernel::cols() const {
  return std::visit([](const auto& e) { return e.cols(); }, impl_->ech);
}

std::vector<std::uint32_t> SparseKernel::pivot_columns() const {
  return std::visit(
      [](const auto& e) {
        std::vector<std::uint32_t> out;
        for (const auto& kv : e.pivots()) out.push_back(kv.first);
        return out;
      },
      impl_->ech);
}

std::vector<std::uint32_t> SparseKernel::free_columns() const {
  return std::visit([](const auto& e) { return e.free_columns(); }, impl_->ech);
}

ScalarVector SparseKernel::kernel_vector(std::uint32_t free_col) const {
  Field f = impl_->field;
  return std::visit(
      [&](const auto& e) {
        auto raw = e.kernel_vector(free_col);
        ScalarVector out;
        out.reserve(raw.size());
        for (const auto& v : raw) out.emplace_back(f, v);
        return out;
      },
      impl_->ech);
}

std::size_t rank_mod_p(const std::vector<SparseRow>& rows, std::uint32_t cols, std::uint64_t p) {
  ModArith arith{p};
  Echelon<ModArith> ech(arith, cols);
  for (const auto& row : rows) {
    Echelon<ModArith>::Row r;
    r.reserve(row.size());
    for (const auto& [c, v] : row) {
      auto x = arith.from_scalar(v);
      if (x != 0) r.emplace_back(c, x);
    }
    ech.add_row(std::move(r));
  }
  return ech.rank();
}

namespace {

SparseKernel echelon_of(const ScalarMatrix& m, const ScalarVector* rhs) {
  auto cols = static_cast<std::uint32_t>(m.cols() + (rhs ? 1 : 0));
  SparseKernel k(m.field(), cols);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    SparseRow row;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j).is_zero()) row.emplace_back(static_cast<std::uint32_t>(j), m.at(i, j));
    }
    if (rhs && !(*rhs)[i].is_zero()) row.emplace_back(static_cast<std::uint32_t>(m.cols()), -(*rhs)[i]);
    k.add_row(row);
  }
  return k;
}

} // namespace

std::vector<ScalarVector> nullspace(const ScalarMatrix& m) {
  SparseKernel k = echelon_of(m, nullptr);
  std::vector<ScalarVector> basis;
  for (auto f : k.free_columns()) basis.push_back(k.kernel_vector(f));
  return basis;
}

std::optional<ScalarVector> solve_linear(const ScalarMatrix& m, const ScalarVector& rhs) {
  if (rhs.size() != m.rows()) throw InvalidArgument("rhs length does not match rows");
  SparseKernel k = echelon_of(m, &rhs);
  auto last = static_cast<std::uint32_t>(m.cols());
  for (auto c : k.pivot_columns()) {
    if (c == last) return std::nullopt;
  }
  ScalarVector v = k.kernel_vector(last);
  v.pop_back();
  return v;
}

std::size_t rank(const ScalarMatrix& m) { return echelon_of(m, nullptr).rank(); }

ScalarMatrix inverse(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("inverse of a non-square matrix");
  std::size_t n = m.rows();
  if (rank(m) < n) throw DivisionByZero("singular matrix has no inverse");
  ScalarMatrix inv(m.field(), n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ScalarVector e(n, Scalar(m.field()));
    e[j] = Scalar(m.field(), 1);
    auto col = solve_linear(m, e);
    if (!col) throw DivisionByZero("singular matrix has no inverse");
    for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = (*col)[i];
  }
  return inv;
}

} // namespace dmod
