#include "dmod/polynomial.hpp"

#include "dmod/linalg.hpp"

namespace dmod {

Polynomial::Polynomial(int m, Field f) : m_(m), field_(f) {
  if (m < 0 || m > kMaxVars) throw InvalidArgument("number of variables out of range");
}

Polynomial Polynomial::constant(int m, const Scalar& c) {
  Polynomial p(m, c.field());
  p.add_term(Exponents{}, c);
  return p;
}

Polynomial Polynomial::variable(int m, Field f, int i) {
  if (i < 1 || i > m) throw IndexOutOfRange("variable X" + std::to_string(i));
  Polynomial p(m, f);
  Exponents e{};
  e[i - 1] = 1;
  p.add_term(e, Scalar(f, 1));
  return p;
}

void Polynomial::add_term(const Exponents& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int i = 0; i < m_; ++i) s += e[i];
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(m_, field_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e{};
      for (int i = 0; i < m_; ++i) e[i] = static_cast<std::uint16_t>(e1[i] + e2[i]);
      r.add_term(e, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::operator*(const Scalar& c) const {
  Polynomial r(m_, field_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  return m_ == o.m_ && field_ == o.field_ && terms_ == o.terms_;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial r(m_, field_);
  for (const auto& [e, c] : terms_) {
    if (e[i - 1] == 0) continue;
    Exponents f = e;
    --f[i - 1];
    r.add_term(f, c * Scalar(field_, static_cast<long>(e[i - 1])));
  }
  return r;
}

std::uint64_t Polynomial::eval_mod(const std::vector<std::int64_t>& point, std::uint64_t p) const {
  std::vector<std::uint64_t> base(m_);
  for (int i = 0; i < m_; ++i) {
    std::int64_t v = point[i] % static_cast<std::int64_t>(p);
    base[i] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(p) : v);
  }
  std::uint64_t acc = 0;
  for (const auto& [e, c] : terms_) {
    std::uint64_t t = field_.is_rational() ? reduce_mod(c.rational_value(), p) : c.residue() % p;
    for (int i = 0; i < m_; ++i) {
      if (e[i]) t = mul_mod(t, pow_mod(base[i], e[i], p), p);
    }
    acc = (acc + t) % p;
  }
  return acc;
}

std::size_t rank_specialized(const PolyMatrix& p, int trials, std::uint64_t seed) {
  if (p.empty() || p.front().empty()) return 0;
  const int m = p.front().front().nvars();
  for (const auto& row : p)
    for (const auto& e : row) {
      if (!e.field().is_rational()) {
        throw CharPUnsupported("specialized rank requires field Q");
      }
    }
  const auto cols = static_cast<std::uint32_t>(p.front().size());
  constexpr std::int64_t kBound = std::int64_t{1} << 16;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-kBound, kBound);
  std::size_t best = 0;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    std::vector<std::int64_t> point(m);
    for (auto& v : point) v = coord(rng);
    std::vector<SparseRow> rows;
    rows.reserve(p.size());
    const Field fp{kScreeningPrime};
    for (const auto& row : p) {
      SparseRow r;
      for (std::uint32_t j = 0; j < cols; ++j) {
        auto v = row[j].eval_mod(point, kScreeningPrime);
        if (v) r.emplace_back(j, Scalar(fp, static_cast<long>(v)));
      }
      rows.push_back(std::move(r));
    }
    best = std::max(best, rank_mod_p(rows, cols, kScreeningPrime));
  }
  return best;
}

} // namespace dmod
