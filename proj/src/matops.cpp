#include "dmod/matops.hpp"

#include <algorithm>
#include <numeric>

namespace dmod {

LinearSystem::LinearSystem(FractionContext c, OpMatrix a_, std::vector<WeylOp> rhs_)
    : ctx(std::move(c)), a(std::move(a_)), rhs(std::move(rhs_)) {
  if (rhs.size() != a.rows()) throw InvalidArgument("rhs length does not match the number of equations");
  if (a.m() != ctx.m || !(a.field() == ctx.field)) throw InvalidArgument("matrix does not match the context");
  if (!a.derivation_support().subset_of(ctx.ka)) throw InvalidArgument("coefficients leave A^" + ctx.ka.str());
  for (const auto& r : rhs) {
    if (r.m() != ctx.m) throw InvalidArgument("rhs entry over a different m");
    if (!(r.field() == ctx.field)) throw FieldMismatch("rhs entry over a different field");
    if (!r.in_subalgebra(ctx.ka)) throw InvalidArgument("rhs leaves A^" + ctx.ka.str());
  }
}

int LinearSystem::degree() const {
  int d = a.degree();
  for (const auto& r : rhs) d = std::max(d, bernstein_degree(r));
  return d;
}

int Trapezoid::degree() const {
  int d = g.rows() ? g.degree() : -1;
  for (const auto& x : f) d = std::max(d, bernstein_degree(x));
  return d;
}

namespace {

VarIndexSet algebra_of(const OpMatrix& g, const std::optional<VarIndexSet>& alg) {
  return alg ? *alg : VarIndexSet::full(g.m());
}

} // namespace

RankInfo skew_rank(const OpMatrix& g, const std::optional<VarIndexSet>& alg) {
  VarIndexSet k = algebra_of(g, alg);
  OpMatrix w = g;
  RankInfo info;
  std::vector<bool> row_used(g.rows(), false), col_used(g.cols(), false);
  while (true) {
    std::size_t pi = 0, pj = 0;
    std::pair<int, std::size_t> best{-1, 0};
    for (std::size_t i = 0; i < w.rows(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (col_used[j] || w.at(i, j).is_zero()) continue;
        std::pair<int, std::size_t> key{bernstein_degree(w.at(i, j)), w.at(i, j).size()};
        if (best.first < 0 || key < best) {
          best = key;
          pi = i;
          pj = j;
        }
      }
    }
    if (best.first < 0) break;
    row_used[pi] = col_used[pj] = true;
    info.pivot_rows.push_back(pi);
    info.pivot_cols.push_back(pj);
    for (std::size_t kr = 0; kr < w.rows(); ++kr) {
      if (row_used[kr] || w.at(kr, pj).is_zero()) continue;
      // u * w[kr][pj] = v * w[pi][pj]
      CommonMultiple cm = common_multiple({w.at(kr, pj), w.at(pi, pj)}, Side::Left, k);
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (col_used[j] && j != pj) continue;
        WeylOp v = cm.c[0] * w.at(kr, j) - cm.c[1] * w.at(pi, j);
        w.at(kr, j) = std::move(v);
      }
    }
  }
  info.rank = info.pivot_rows.size();
  return info;
}

OpMatrix left_quasi_inverse(const OpMatrix& b, const std::optional<VarIndexSet>& alg) {
  if (b.rows() != b.cols()) throw InvalidArgument("quasi-inverse of a non-square matrix");
  const std::size_t p = b.rows();
  if (skew_rank(b, alg).rank < p) throw SingularInput("matrix is singular over the skew field");
  OpMatrix c(b.m(), b.field(), p, p);
  if (p == 1) {
    c.at(0, 0) = WeylOp::constant(b.m(), b.field(), 1);
    return c;
  }
  VarIndexSet k = algebra_of(b, alg);
  for (std::size_t i = 0; i < p; ++i) {
    Syzygy s = syzygy(b.without_column(i), Side::Left, k);
    for (std::size_t j = 0; j < p; ++j) c.at(i, j) = s.c[j];
  }
  return c;
}

namespace {

// Left syzygy y of the top r rows plus bottom row k, restricted to the first
// r columns: y_top * G_top_left + y_k * G_k_left = 0, with y_k != 0.
std::vector<WeylOp> bottom_syzygy(const OpMatrix& g, std::size_t r, std::size_t k, const VarIndexSet& alg) {
  std::vector<std::size_t> rows(r), cols(r);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  rows.push_back(k);
  if (r == 0) {
    return {WeylOp::constant(g.m(), g.field(), 1)};
  }
  return syzygy(g.submatrix(rows, cols), Side::Left, alg).c;
}

WeylOp combine_row(const std::vector<WeylOp>& y, const OpMatrix& g, std::size_t r, std::size_t k, std::size_t col) {
  WeylOp acc(g.m(), g.field());
  for (std::size_t i = 0; i < r; ++i) {
    if (!y[i].is_zero() && !g.at(i, col).is_zero()) acc += y[i] * g.at(i, col);
  }
  if (!g.at(k, col).is_zero()) acc += y[r] * g.at(k, col);
  return acc;
}

OpMatrix top_product(const OpMatrix& c1, const OpMatrix& g, std::size_t r) {
  std::vector<std::size_t> rows(r), cols(g.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  return c1 * g.submatrix(rows, cols);
}

} // namespace

BlockReduction block_reduce(const OpMatrix& g, std::size_t r, const OpMatrix& c1,
                            const std::optional<VarIndexSet>& alg) {
  if (r > g.rows() || r > g.cols()) throw InvalidArgument("block size exceeds the matrix");
  if (c1.rows() != r || c1.cols() != r) throw InvalidArgument("C1 must be r x r");
  VarIndexSet k = algebra_of(g, alg);
  FractionContext ctx(g.m(), g.field(), k, k);
  BlockReduction out;
  out.reduced = OpMatrix(g.m(), g.field(), g.rows(), g.cols());
  if (r > 0) {
    OpMatrix top = top_product(c1, g, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) out.reduced.at(i, j) = top.at(i, j);
  }
  for (std::size_t row = r; row < g.rows(); ++row) {
    std::vector<WeylOp> y = bottom_syzygy(g, r, row, k);
    for (std::size_t col = r; col < g.cols(); ++col) {
      if (!combine_row(y, g, r, row, col).is_zero()) {
        throw RankViolation("row " + std::to_string(row) + " is not in the span of the leading rows");
      }
    }
    // the bottom row becomes zero after adding C2_k * G_top with
    // C2_k = y_k^{-1} y_top
    std::vector<OreFraction> c2row;
    for (std::size_t i = 0; i < r; ++i) c2row.push_back(left_to_right(ctx, y[r], y[i]));
    out.c2.push_back(std::move(c2row));
  }
  return out;
}

std::optional<Trapezoid> trapezoid_reduce(const LinearSystem& sys) {
  const OpMatrix& a = sys.a;
  const std::size_t q = a.rows(), p = a.cols();
  RankInfo info = skew_rank(a, sys.ctx.ka);
  const std::size_t r = info.rank;

  Trapezoid out;
  out.ctx = sys.ctx;
  out.r = r;
  out.row_perm = info.pivot_rows;
  out.col_perm = info.pivot_cols;
  for (std::size_t i = 0; i < q; ++i) {
    if (std::find(out.row_perm.begin(), out.row_perm.end(), i) == out.row_perm.end()) out.row_perm.push_back(i);
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (std::find(out.col_perm.begin(), out.col_perm.end(), j) == out.col_perm.end()) out.col_perm.push_back(j);
  }
  // permuted matrix with the rhs appended as an extra column
  OpMatrix g(a.m(), a.field(), q, p + 1);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < p; ++j) g.at(i, j) = a.at(out.row_perm[i], out.col_perm[j]);
    g.at(i, p) = sys.rhs[out.row_perm[i]];
  }
  for (std::size_t row = r; row < q; ++row) {
    std::vector<WeylOp> y = bottom_syzygy(g, r, row, sys.ctx.ka);
    for (std::size_t col = r; col < p; ++col) {
      if (!combine_row(y, g, r, row, col).is_zero()) {
        throw RankViolation("row " + std::to_string(row) + " exceeds the computed rank");
      }
    }
    if (!combine_row(y, g, r, row, p).is_zero()) return std::nullopt;
  }
  out.g = OpMatrix(a.m(), a.field(), r, p);
  out.f.assign(r, WeylOp(a.m(), a.field()));
  if (r > 0) {
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    OpMatrix c1 = left_quasi_inverse(g.submatrix(idx, idx), sys.ctx.ka);
    OpMatrix top = top_product(c1, g, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < p; ++j) out.g.at(i, j) = top.at(i, j);
      out.f[i] = top.at(i, p);
    }
  }
  return out;
}

} // namespace dmod
