#pragma once

#include <cstdint>
#include <compare>
#include <gmpxx.h>
#include <string>
#include <string_view>

#include "dmod/error.hpp"

namespace dmod {

/// Ground field descriptor: the rationals (p == 0) or the prime field F_p.
struct Field {
  std::uint64_t p = 0;

  static Field rationals() { return Field{0}; }
  /// Throws InvalidArgument unless p is a prime below 2^63.
  static Field prime(std::uint64_t p);
  /// Accepts "q" or "fp:<prime>".
  static Field parse(std::string_view text);

  bool is_rational() const { return p == 0; }
  std::string name() const;

  friend bool operator==(Field, Field) = default;
};

bool is_prime_u64(std::uint64_t n);
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
  if (p == kMersenne61) {
    std::uint64_t r = static_cast<std::uint64_t>(x & p) + static_cast<std::uint64_t>(x >> 61);
    r = (r & p) + (r >> 61);
    return r >= p ? r - p : r;
  }
  return static_cast<std::uint64_t>(x % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// Reduces a rational into F_p. Throws DivisionByZero if p divides the
/// denominator.
std::uint64_t reduce_mod(const mpq_class& q, std::uint64_t p);
std::uint64_t reduce_mod(const mpz_class& z, std::uint64_t p);

/// An exact element of a Field. Rationals are kept in lowest terms with a
/// positive denominator; residues lie in [0, p).
class Scalar {
public:
  Scalar() = default; // zero of Q
  explicit Scalar(Field f) : field_(f) {}
  Scalar(Field f, long value);
  Scalar(Field f, const mpz_class& value);
  Scalar(Field f, const mpq_class& value);

  static Scalar rational(long num, long den = 1);

  Field field() const { return field_; }
  bool is_zero() const { return field_.is_rational() ? q_ == 0 : r_ == 0; }
  bool is_one() const { return field_.is_rational() ? q_ == 1 : r_ == 1; }

  /// Q only.
  const mpq_class& rational_value() const { return q_; }
  /// F_p only.
  std::uint64_t residue() const { return r_; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);

  /// Throws DivisionByZero on zero.
  Scalar inv() const;

  /// Field-tagged equality; throws FieldMismatch on differing fields.
  bool operator==(const Scalar& o) const;

  /// Negative iff (Q and < 0). Used only for printing signs.
  bool is_negative() const { return field_.is_rational() && q_ < 0; }
  std::string str() const;

private:
  void check(const Scalar& o) const {
    if (!(field_ == o.field_)) {
      throw FieldMismatch(field_.name() + " vs " + o.field_.name());
    }
  }

  Field field_{};
  mpq_class q_{};
  std::uint64_t r_ = 0;
};

} // namespace dmod
