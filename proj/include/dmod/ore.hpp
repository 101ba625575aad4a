#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmod/ansatz.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

/// Numerators live in A^(ka), denominators in A^(kd), kd a subset of ka.
struct FractionContext {
  int m = 0;
  Field field{};
  VarIndexSet ka;
  VarIndexSet kd;

  FractionContext() = default;
  FractionContext(int m, Field f, VarIndexSet ka, VarIndexSet kd);
  /// Ka = {1..m}, Kd = K.
  static FractionContext standard(int m, Field f, const VarIndexSet& k);

  bool operator==(const FractionContext& o) const = default;
  std::string str() const;
};

/// num * den^{-1}. No normal form: compare with frac_eq.
class OreFraction {
public:
  OreFraction() = default;
  /// Throws ZeroDenominator for den == 0 and InvalidArgument if num or den
  /// use derivations outside ka / kd. A zero numerator is stored as (0, 1).
  OreFraction(FractionContext ctx, WeylOp num, WeylOp den);
  static OreFraction from_op(const FractionContext& ctx, const WeylOp& a);
  static OreFraction zero(const FractionContext& ctx);

  const FractionContext& ctx() const { return ctx_; }
  const WeylOp& num() const { return num_; }
  const WeylOp& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  /// Representative degrees (Bernstein).
  int num_degree() const { return bernstein_degree(num_); }
  int den_degree() const { return bernstein_degree(den_); }

  std::string str() const;

private:
  FractionContext ctx_;
  WeylOp num_;
  WeylOp den_;
};

/// 2 (m + |K|) e d, the degree bound for a syzygy of e equations of degree d.
long syzygy_degree_bound(int m, int k_size, std::size_t equations, int d);

struct Syzygy {
  std::vector<WeylOp> c;
  int degree = -1; ///< ansatz degree at which it was found
  long bound = 0;  ///< 2 (m + |K|) (#equations) deg(B)
};

/// Nonzero c with entries in A^(k): Side::Right gives B c = 0 (c has
/// B.cols() entries), Side::Left gives c B = 0 (c has B.rows() entries).
/// Degrees are tried from 0 upward; the first kernel vector is returned,
/// scaled so its first nonzero entry is monic. The search stops at
/// min(bound, cap): UndecidedAtCap when a smaller cap stopped it,
/// NotFoundWithinBound otherwise.
Syzygy syzygy(const OpMatrix& b, Side side, const VarIndexSet& k, std::optional<int> cap = std::nullopt);

struct CommonMultiple {
  std::vector<WeylOp> c;
  WeylOp value; ///< the common product
  int degree = -1;
  long bound = 0;
};

/// Cofactors c_i in A^(k) with b_i c_i all equal (Side::Right) or c_i b_i
/// all equal (Side::Left), the common value nonzero. Throws InvalidArgument
/// for a zero b_i.
CommonMultiple common_multiple(const std::vector<WeylOp>& bs, Side side, const VarIndexSet& k,
                               std::optional<int> cap = std::nullopt);

struct Swap {
  WeylOp alpha; ///< in A^(ka)
  WeylOp beta;  ///< in A^(kd), nonzero
};

/// b alpha = a beta, i.e. b^{-1} a = alpha beta^{-1}. Throws ZeroDenominator
/// for b == 0.
Swap swap_denominator(const WeylOp& b, const WeylOp& a, const FractionContext& ctx);

OreFraction frac_add(const OreFraction& u, const OreFraction& v);
OreFraction frac_neg(const OreFraction& u);
OreFraction frac_sub(const OreFraction& u, const OreFraction& v);
OreFraction frac_mul(const OreFraction& u, const OreFraction& v);
/// Decides equality exactly through a common right multiple of the two
/// denominators. With a cap smaller than the syzygy bound the search may stop
/// early; then UndecidedAtCap is thrown.
bool frac_eq(const OreFraction& u, const OreFraction& v, std::optional<int> cap = std::nullopt);

/// Left fraction b^{-1} a rewritten as a right fraction.
OreFraction left_to_right(const FractionContext& ctx, const WeylOp& b, const WeylOp& a);

} // namespace dmod
