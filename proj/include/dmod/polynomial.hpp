#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "dmod/scalar.hpp"

namespace dmod {

inline constexpr int kMaxVars = 8;

using Exponents = std::array<std::uint16_t, kMaxVars>;

/// Commutative polynomial in X_1..X_m over a Field.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(int m, Field f);
  static Polynomial constant(int m, const Scalar& c);
  static Polynomial variable(int m, Field f, int i); // 1-based

  int nvars() const { return m_; }
  Field field() const { return field_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Scalar>& terms() const { return terms_; }

  void add_term(const Exponents& e, const Scalar& c);
  /// Total degree; -1 for zero.
  int degree() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Scalar& c) const;
  bool operator==(const Polynomial& o) const;

  /// d/dX_i, 1-based.
  Polynomial derivative(int i) const;
  /// Value at an integer point, reduced mod p.
  std::uint64_t eval_mod(const std::vector<std::int64_t>& point, std::uint64_t p) const;

private:
  int m_ = 0;
  Field field_{};
  std::map<Exponents, Scalar> terms_;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Maximum over `trials` random integer specializations (coordinates uniform
/// in [-2^16, 2^16]) of the rank of the specialized matrix. Each specialized
/// rank is computed modulo 2^61 - 1, so every trial is a lower bound on the
/// rank over F(X_1..X_m). Requires field Q.
std::size_t rank_specialized(const PolyMatrix& p, int trials, std::uint64_t seed);

} // namespace dmod
