#include "dmod/scalar.hpp"

#include <charconv>

namespace dmod {

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DivisionByZero("inverse of 0 mod " + std::to_string(p));
  return pow_mod(a, p - 2, p);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic witness set for 64-bit inputs
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 63) || !is_prime_u64(p)) {
    throw InvalidArgument("not a supported prime: " + std::to_string(p));
  }
  return Field{p};
}

Field Field::parse(std::string_view text) {
  if (text == "q" || text == "Q") return rationals();
  if (text.substr(0, 3) == "fp:") {
    std::uint64_t p = 0;
    auto body = text.substr(3);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw InvalidArgument("bad prime in field spec '" + std::string(text) + "'");
    }
    return prime(p);
  }
  throw InvalidArgument("unknown field '" + std::string(text) + "' (expected q or fp:<p>)");
}

std::string Field::name() const { return is_rational() ? "q" : "fp:" + std::to_string(p); }

std::uint64_t reduce_mod(const mpz_class& z, std::uint64_t p) {
  mpz_class r;
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t());
  std::uint64_t out = 0;
  if (r != 0) mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

std::uint64_t reduce_mod(const mpq_class& q, std::uint64_t p) {
  std::uint64_t den = reduce_mod(q.get_den(), p);
  if (den == 0) throw DivisionByZero("denominator vanishes mod " + std::to_string(p));
  return mul_mod(reduce_mod(q.get_num(), p), inv_mod(den, p), p);
}

Scalar::Scalar(Field f, long value) : field_(f) {
  if (f.is_rational()) {
    q_ = value;
  } else {
    auto m = static_cast<long long>(f.p);
    long long r = value % m;
    if (r < 0) r += m;
    r_ = static_cast<std::uint64_t>(r);
  }
}

Scalar::Scalar(Field f, const mpz_class& value) : field_(f) {
  if (f.is_rational()) {
    q_ = value;
  } else {
    r_ = reduce_mod(value, f.p);
  }
}

Scalar::Scalar(Field f, const mpq_class& value) : field_(f) {
  if (f.is_rational()) {
    q_ = value;
    q_.canonicalize();
  } else {
    r_ = reduce_mod(value, f.p);
  }
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(Field::rationals(), q);
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r = *this;
  r += o;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r = *this;
  r -= o;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r = *this;
  r *= o;
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar& Scalar::operator+=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ += o.q_;
  } else {
    r_ += o.r_;
    if (r_ >= field_.p) r_ -= field_.p;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ -= o.q_;
  } else {
    r_ = r_ >= o.r_ ? r_ - o.r_ : r_ + field_.p - o.r_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ *= o.q_;
  } else {
    r_ = mul_mod(r_, o.r_, field_.p);
  }
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar r(field_);
  if (field_.is_rational()) {
    r.q_ = -q_;
  } else {
    r.r_ = r_ == 0 ? 0 : field_.p - r_;
  }
  return r;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  Scalar r(field_);
  if (field_.is_rational()) {
    r.q_ = 1 / q_;
  } else {
    r.r_ = inv_mod(r_, field_.p);
  }
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  check(o);
  return field_.is_rational() ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const {
  return field_.is_rational() ? q_.get_str() : std::to_string(r_);
}

} // namespace dmod
