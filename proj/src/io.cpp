#include "dmod/io.hpp"

#include <cctype>

namespace dmod {

namespace {

class Parser {
public:
  Parser(std::string_view text, int m, Field f) : s_(text), m_(m), f_(f) {}

  WeylOp run() {
    WeylOp r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  int peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : -1;
  }

  bool digit_next() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  // At a '-': whether a rational literal follows it.
  bool digit_after_minus() {
    std::size_t save = pos_;
    skip();
    ++pos_;
    bool r = digit_next();
    pos_ = save;
    return r;
  }

  mpz_class uint() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an unsigned integer");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }

  WeylOp expr() {
    WeylOp r = term();
    while (true) {
      int c = peek();
      if (c != '+' && c != '-') return r;
      ++pos_;
      if (c == '+') {
        r += term();
      } else {
        r -= term();
      }
    }
  }

  WeylOp term() {
    WeylOp r = factor();
    while (peek() == '*') {
      ++pos_;
      r = r * factor();
    }
    return r;
  }

  WeylOp factor() {
    if (peek() == '-' && !digit_after_minus()) {
      // leniency: "-x1^2" reads as -(x1^2)
      ++pos_;
      return -factor();
    }
    WeylOp b = base();
    if (peek() != '^') return b;
    ++pos_;
    std::size_t at = pos_;
    mpz_class e = uint();
    if (e > 4096) throw SyntaxError("exponent too large", at);
    WeylOp r = WeylOp::constant(m_, f_, 1);
    for (unsigned long k = 0; k < e.get_ui(); ++k) r = r * b;
    return r;
  }

  WeylOp base() {
    int c = peek();
    if (c == '(') {
      ++pos_;
      WeylOp r = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (c == 'x' || c == 'd') {
      std::size_t at = pos_;
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a variable index");
      mpz_class idx = uint();
      if (idx < 1 || idx > m_) {
        throw IndexOutOfRange(std::string(1, static_cast<char>(c)) + idx.get_str() + " at position " +
                              std::to_string(at) + " exceeds m=" + std::to_string(m_));
      }
      int i = static_cast<int>(idx.get_si());
      return c == 'x' ? WeylOp::x(m_, f_, i) : WeylOp::d(m_, f_, i);
    }
    if (c == '-') {
      ++pos_;
      if (!digit_next()) fail("expected a digit after '-'");
      return -rational();
    }
    if (c >= 0 && std::isdigit(c)) return rational();
    if (c < 0) fail("unexpected end of input");
    fail("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
  }

  WeylOp rational() {
    mpz_class num = uint();
    mpz_class den = 1;
    if (peek() == '/') {
      ++pos_;
      std::size_t at = pos_;
      den = uint();
      if (den == 0) throw SyntaxError("zero denominator", at);
    }
    Scalar v = Scalar(f_, num);
    if (den != 1) v = v / Scalar(f_, den);
    return WeylOp::constant(m_, v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int m_;
  Field f_;
};

std::string monomial_factors(const Exponents& x, const Exponents* d, int m) {
  std::string out;
  auto put = [&](char v, int i, int e) {
    if (!e) return;
    if (!out.empty()) out += '*';
    out += v + std::to_string(i + 1);
    if (e > 1) out += '^' + std::to_string(e);
  };
  for (int i = 0; i < m; ++i) put('x', i, x[i]);
  if (d) {
    for (int i = 0; i < m; ++i) put('d', i, (*d)[i]);
  }
  return out;
}

template <class It>
std::string join_terms(It begin, It end, int m, bool has_d) {
  if (begin == end) return "0";
  std::string out;
  bool first = true;
  for (auto it = begin; it != end; ++it) {
    const auto& [mono, c] = *it;
    std::string factors = monomial_factors(mono.x, has_d ? &mono.d : nullptr, m);
    bool neg = c.is_negative();
    Scalar mag = neg ? -c : c;
    std::string body;
    if (factors.empty()) {
      body = mag.str();
    } else if (mag.is_one()) {
      body = factors;
    } else {
      body = mag.str() + "*" + factors;
    }
    if (first) {
      out = neg ? "-" + body : body;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
    first = false;
  }
  return out;
}

} // namespace

WeylOp parse_operator(std::string_view text, int m, Field field) { return Parser(text, m, field).run(); }

std::string to_string(const WeylOp& a) {
  return join_terms(a.terms().rbegin(), a.terms().rend(), a.m(), true);
}

std::string to_string(const Polynomial& p) {
  // Polynomial terms are keyed by exponents only; order them like operators.
  std::map<Monomial, Scalar> ordered;
  for (const auto& [e, c] : p.terms()) ordered.emplace(Monomial{e, {}}, c);
  return join_terms(ordered.rbegin(), ordered.rend(), p.nvars(), false);
}

} // namespace dmod
