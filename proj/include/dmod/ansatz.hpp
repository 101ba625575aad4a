#pragma once

// Undetermined-coefficient systems: each unknown operator u_j is written as a
// generic combination of monomials of Bernstein degree <= D in its own
// subalgebra, and the operator equations become an F-linear system.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dmod/budget.hpp"
#include "dmod/linalg.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

/// Which side an unknown multiplies from. Right: sum_j M[i][j] * u_j = 0.
/// Left: sum_j u_j * M[j][i] = 0.
enum class Side { Right, Left };

/// Process-wide resource limits for the undetermined-coefficient searches.
struct Limits {
  std::size_t max_columns = 6000;    ///< unknown coefficients in one linear system
  std::size_t max_unknowns = 400;    ///< operator unknowns emitted by one elimination step
  std::size_t max_work = 1'000'000'000; ///< elimination steps allowed in one decide_solve call
};
Limits& limits();


/// Monomials of Bernstein degree <= deg using X_1..X_m and D_k, k in alg,
/// in increasing graded-lex order.
std::vector<Monomial> monomials_up_to(int m, const VarIndexSet& alg, int deg);

class AnsatzSystem {
public:
  /// `coeffs` is indexed [equation][unknown] for Side::Right and
  /// [unknown][equation] for Side::Left. Throws ResourceCap if the number of
  /// unknown coefficients exceeds limits().max_columns.
  AnsatzSystem(int m, Field f, Side side, const std::vector<std::vector<WeylOp>>& coeffs,
               const std::vector<VarIndexSet>& algs, int degree);

  std::size_t unknowns() const { return begin_.size() - 1; }
  std::size_t columns() const { return cols_.size(); }
  /// Column range [begin(j), begin(j+1)) belonging to unknown j.
  std::size_t begin(std::size_t j) const { return begin_[j]; }

  /// True when the kernel is certainly trivial (checked modulo a large prime
  /// first for rational input, which never reports a false "trivial").
  bool kernel_trivial();
  /// Exact echelon form of the system.
  const SparseKernel& exact();
  /// A nonzero kernel vector, or nullopt when the kernel is trivial. The
  /// candidate free column is the first one whose kernel vector modulo a large
  /// prime satisfies `accept`; over Q the vector is lifted from several primes
  /// by rational reconstruction and verified exactly before it is returned.
  std::optional<ScalarVector> kernel_vector(
      const std::function<bool(const std::vector<std::uint64_t>&)>& accept = {});
  /// Index of the unknown that column c belongs to.
  std::size_t unknown_of(std::size_t c) const { return cols_[c].first; }
  std::vector<WeylOp> to_ops(const ScalarVector& v) const;

private:
  using Accept = std::function<bool(const std::vector<std::uint64_t>&)>;
  /// p-adic lifting from one elimination modulo the screening prime. The
  /// outer nullopt means the lift did not produce a verified vector.
  std::optional<std::optional<ScalarVector>> padic_lift(const Accept& accept);
  std::optional<ScalarVector> lift_rational(const Accept& accept);
  bool is_kernel_vector(const ScalarVector& v) const;

  int m_;
  Field f_;
  std::vector<std::pair<std::size_t, Monomial>> cols_;
  std::vector<std::size_t> begin_;
  std::vector<SparseRow> rows_;
  std::optional<SparseKernel> exact_;
  std::optional<bool> trivial_;
  std::optional<std::optional<ScalarVector>> any_kernel_;
};

} // namespace dmod
