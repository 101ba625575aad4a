#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmod/linalg.hpp"
#include "dmod/polynomial.hpp"
#include "dmod/scalar.hpp"

namespace dmod {

/// A subset of {1..m}, used to name which derivations D_k are admitted.
class VarIndexSet {
public:
  VarIndexSet() = default;
  explicit VarIndexSet(int m) : m_(m) { check_m(m); }
  VarIndexSet(int m, std::initializer_list<int> members);
  VarIndexSet(int m, const std::vector<int>& members);

  static VarIndexSet full(int m);
  static VarIndexSet empty(int m) { return VarIndexSet(m); }

  int m() const { return m_; }
  bool contains(int k) const { return k >= 1 && k <= m_ && ((bits_ >> (k - 1)) & 1U); }
  int size() const { return __builtin_popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  std::vector<int> members() const;
  std::uint32_t bits() const { return bits_; }

  VarIndexSet with(int k) const;
  VarIndexSet without(int k) const;
  VarIndexSet complement() const;
  VarIndexSet operator|(const VarIndexSet& o) const;
  VarIndexSet operator&(const VarIndexSet& o) const;
  VarIndexSet operator-(const VarIndexSet& o) const;
  bool subset_of(const VarIndexSet& o) const { return (bits_ & ~o.bits_) == 0; }
  bool operator==(const VarIndexSet& o) const = default;

  std::string str() const;

private:
  static void check_m(int m);
  int m_ = 0;
  std::uint32_t bits_ = 0;
};

/// X^xexp D^dexp in normal order (all X before all D). Compared by graded
/// lexicographic order on (xexp, dexp).
struct Monomial {
  Exponents x{};
  Exponents d{};

  int total() const;
  int xdegree() const;
  int ddegree() const;
  bool operator==(const Monomial& o) const = default;
  std::strong_ordering operator<=>(const Monomial& o) const;
};

class WeylOp;

/// Sum over terms of coefficient * monomial, stored in normal order with no
/// zero coefficients. `ka` records the derivations the value is declared to
/// live over; it defaults to all of {1..m}.
class WeylOp {
public:
  using Terms = std::map<Monomial, Scalar>;

  WeylOp() = default;
  WeylOp(int m, Field f);
  WeylOp(int m, Field f, VarIndexSet ka);

  static WeylOp constant(int m, const Scalar& c);
  static WeylOp constant(int m, Field f, long c) { return constant(m, Scalar(f, c)); }
  static WeylOp x(int m, Field f, int i);
  static WeylOp d(int m, Field f, int i);
  static WeylOp monomial(int m, const Monomial& mono, const Scalar& c);

  int m() const { return m_; }
  Field field() const { return field_; }
  const VarIndexSet& ka() const { return ka_; }
  /// Re-tags the admitted derivations; throws InvalidArgument if a term uses
  /// a derivation outside `ka`.
  WeylOp with_ka(const VarIndexSet& ka) const;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Derivations that actually occur.
  VarIndexSet derivation_support() const;
  bool in_subalgebra(const VarIndexSet& k) const { return derivation_support().subset_of(k); }

  void add_term(const Monomial& mono, const Scalar& c);
  /// Greatest term in graded lex order; throws on zero.
  std::pair<Monomial, Scalar> leading_term() const;
  Scalar coefficient(const Monomial& mono) const;

  WeylOp operator+(const WeylOp& o) const;
  WeylOp operator-(const WeylOp& o) const;
  WeylOp operator-() const;
  WeylOp operator*(const WeylOp& o) const;
  WeylOp operator*(const Scalar& c) const;
  WeylOp& operator+=(const WeylOp& o);
  WeylOp& operator-=(const WeylOp& o);
  bool operator==(const WeylOp& o) const;

  /// Copy scaled so that the leading coefficient is 1 (zero stays zero).
  WeylOp monic() const;

private:
  void check_compatible(const WeylOp& o) const;

  int m_ = 0;
  Field field_{};
  VarIndexSet ka_{};
  Terms terms_;
};

/// Product in A_m rewritten to normal order; same as a * b.
WeylOp normal_order_product(const WeylOp& a, const WeylOp& b);

/// Sum of coeffs[i] * ops[i].
WeylOp linear_combine(const std::vector<Scalar>& coeffs, const std::vector<WeylOp>& ops);

enum class DegreeKind {
  Bernstein, ///< total degree in all X and D
  OrdD,      ///< total degree in all D
  OrdK,      ///< degree in D_j, j not in K
  DegK,      ///< degree in all X and D_k, k in K
};

/// -1 on the zero operator. OrdK and DegK throw MissingK without K.
int filtration_degree(const WeylOp& a, DegreeKind kind, const std::optional<VarIndexSet>& k = std::nullopt);
inline int bernstein_degree(const WeylOp& a) { return filtration_degree(a, DegreeKind::Bernstein); }

/// Degree in D_gamma alone; -1 on zero.
int d_degree(const WeylOp& a, int gamma);

/// h = sum_s D_gamma^s h_s with every h_s free of D_gamma; returned by
/// descending s, zero coefficients omitted.
std::vector<std::pair<int, WeylOp>> gamma_decompose(const WeylOp& h, int gamma);

/// h = sum_S D^S h_S where S runs over exponent vectors of the derivations in
/// `outside` (stored in the d-part of the key) and each h_S is free of them.
std::map<Exponents, WeylOp> left_decompose(const WeylOp& h, const VarIndexSet& outside);

/// D^S as an operator; S holds derivation exponents.
WeylOp d_power(int m, Field f, const Exponents& s);

/// Image under the algebra automorphism D -> Omega D, X -> (Omega^T)^{-1} X
/// on the indices outside K (in increasing order), fixing X_k, D_k for k in
/// K. Throws SingularOmega if Omega is not invertible.
WeylOp omega_transform(const WeylOp& h, const ScalarMatrix& omega, const VarIndexSet& k);

/// Action on F[X]: X_i multiplies, D_i differentiates. Field Q only.
Polynomial apply_to_polynomial(const WeylOp& a, const Polynomial& f);

/// Formal adjoint: the anti-automorphism fixing X_i and sending D_i to -D_i.
WeylOp adjoint(const WeylOp& a);

/// Converts a derivation-free operator into a commutative polynomial.
Polynomial as_polynomial(const WeylOp& a);
WeylOp from_polynomial(const Polynomial& p);

/// Dense grid of operators.
class OpMatrix {
public:
  OpMatrix() = default;
  OpMatrix(int m, Field f, std::size_t rows, std::size_t cols);
  explicit OpMatrix(std::vector<std::vector<WeylOp>> rows);

  int m() const { return m_; }
  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  WeylOp& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const WeylOp& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  OpMatrix operator*(const OpMatrix& o) const;
  bool operator==(const OpMatrix& o) const;
  /// Max Bernstein degree over entries; -1 if all zero.
  int degree() const;
  bool is_zero() const;
  VarIndexSet derivation_support() const;
  OpMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  OpMatrix without_column(std::size_t j) const;
  OpMatrix transpose() const;

private:
  int m_ = 0;
  Field field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<WeylOp> entries_;
};

} // namespace dmod
