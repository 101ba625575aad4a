#pragma once

#include <optional>
#include <vector>

#include "dmod/ore.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

/// A q x p system sum_i A[j][i] V_i = rhs[j] over the fractions of ctx.
struct LinearSystem {
  FractionContext ctx;
  OpMatrix a;
  std::vector<WeylOp> rhs;

  LinearSystem() = default;
  /// Throws InvalidArgument on shape or subalgebra mismatches.
  LinearSystem(FractionContext ctx, OpMatrix a, std::vector<WeylOp> rhs);
  std::size_t equations() const { return a.rows(); }
  std::size_t unknowns() const { return a.cols(); }
  /// Max Bernstein degree over coefficients and right-hand sides.
  int degree() const;
};

struct RankInfo {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows; ///< original row indices, in pivot order
  std::vector<std::size_t> pivot_cols;
};

/// Rank over the skew field of fractions, by fraction-free elimination with
/// left common multiples taken in A^(alg) (which must contain every entry).
/// The pivot rows and columns index a non-singular square submatrix.
RankInfo skew_rank(const OpMatrix& g, const std::optional<VarIndexSet>& alg = std::nullopt);

/// Row i is a left syzygy in A^(alg) of B with column i deleted, so C B is
/// diagonal with nonzero diagonal. Throws SingularInput when rank < p.
OpMatrix left_quasi_inverse(const OpMatrix& b, const std::optional<VarIndexSet>& alg = std::nullopt);

struct BlockReduction {
  /// (p1 - r) x r, entries are fractions over A^(alg) with denominators in A^(alg).
  std::vector<std::vector<OreFraction>> c2;
  /// [[C1, 0], [C2, E]] * G: top rows C1 * G_top, bottom rows zero.
  OpMatrix reduced;
};

/// Requires the leading r x r block of G to be non-singular and C1 a left
/// quasi-inverse of it. Throws RankViolation when a bottom row is not in the
/// span of the top rows.
BlockReduction block_reduce(const OpMatrix& g, std::size_t r, const OpMatrix& c1,
                            const std::optional<VarIndexSet>& alg = std::nullopt);

/// Diagonal-trapezium form: g[j][j] V_j + sum_{i >= r} g[j][i] V_i = f[j] for
/// j < r, in the permuted unknowns. col_perm[new] = original column,
/// row_perm[new] = original row.
struct Trapezoid {
  FractionContext ctx;
  std::size_t r = 0;
  OpMatrix g; ///< r x p, top-left block diagonal
  std::vector<WeylOp> f;
  std::vector<std::size_t> col_perm;
  std::vector<std::size_t> row_perm;
  std::size_t p() const { return col_perm.size(); }
  int degree() const;
};

/// nullopt when a dependent row is inconsistent (the system has no solution).
std::optional<Trapezoid> trapezoid_reduce(const LinearSystem& sys);

} // namespace dmod
