#include "dmod/weyl.hpp"

#include <algorithm>
#include <unordered_map>

namespace dmod {

// ---------------------------------------------------------------- VarIndexSet

void VarIndexSet::check_m(int m) {
  if (m < 0 || m > kMaxVars) {
    throw InvalidArgument("number of variables must lie in [0, " + std::to_string(kMaxVars) + "]");
  }
}

VarIndexSet::VarIndexSet(int m, std::initializer_list<int> members)
    : VarIndexSet(m, std::vector<int>(members)) {}

VarIndexSet::VarIndexSet(int m, const std::vector<int>& members) : m_(m) {
  check_m(m);
  for (int k : members) {
    if (k < 1 || k > m) throw IndexOutOfRange("index " + std::to_string(k) + " not in 1.." + std::to_string(m));
    if (contains(k)) throw InvalidArgument("duplicate index " + std::to_string(k));
    bits_ |= 1U << (k - 1);
  }
}

VarIndexSet VarIndexSet::full(int m) {
  VarIndexSet s(m);
  s.bits_ = m == 0 ? 0U : ((1U << m) - 1U);
  return s;
}

std::vector<int> VarIndexSet::members() const {
  std::vector<int> out;
  for (int k = 1; k <= m_; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

VarIndexSet VarIndexSet::with(int k) const {
  if (k < 1 || k > m_) throw IndexOutOfRange("index " + std::to_string(k));
  VarIndexSet s = *this;
  s.bits_ |= 1U << (k - 1);
  return s;
}

VarIndexSet VarIndexSet::without(int k) const {
  VarIndexSet s = *this;
  if (k >= 1 && k <= m_) s.bits_ &= ~(1U << (k - 1));
  return s;
}

VarIndexSet VarIndexSet::complement() const {
  VarIndexSet s = full(m_);
  s.bits_ &= ~bits_;
  return s;
}

VarIndexSet VarIndexSet::operator|(const VarIndexSet& o) const {
  VarIndexSet s(std::max(m_, o.m_));
  s.bits_ = bits_ | o.bits_;
  return s;
}

VarIndexSet VarIndexSet::operator&(const VarIndexSet& o) const {
  VarIndexSet s(std::max(m_, o.m_));
  s.bits_ = bits_ & o.bits_;
  return s;
}

VarIndexSet VarIndexSet::operator-(const VarIndexSet& o) const {
  VarIndexSet s(m_);
  s.bits_ = bits_ & ~o.bits_;
  return s;
}

std::string VarIndexSet::str() const {
  std::string out = "{";
  bool first = true;
  for (int k : members()) {
    if (!first) out += ",";
    out += std::to_string(k);
    first = false;
  }
  return out + "}";
}

// ------------------------------------------------------------------- Monomial

int Monomial::xdegree() const {
  int s = 0;
  for (auto e : x) s += e;
  return s;
}

int Monomial::ddegree() const {
  int s = 0;
  for (auto e : d) s += e;
  return s;
}

int Monomial::total() const { return xdegree() + ddegree(); }

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (auto c = total() <=> o.total(); c != 0) return c;
  if (auto c = x <=> o.x; c != 0) return c;
  return d <=> o.d;
}

// --------------------------------------------------------------------- WeylOp

WeylOp::WeylOp(int m, Field f) : WeylOp(m, f, VarIndexSet::full(m)) {}

WeylOp::WeylOp(int m, Field f, VarIndexSet ka) : m_(m), field_(f), ka_(ka) {
  if (m < 0 || m > kMaxVars) throw InvalidArgument("number of variables out of range");
  if (ka.m() != m) throw InvalidArgument("index set built for a different m");
}

WeylOp WeylOp::constant(int m, const Scalar& c) {
  WeylOp r(m, c.field());
  r.add_term(Monomial{}, c);
  return r;
}

WeylOp WeylOp::x(int m, Field f, int i) {
  if (i < 1 || i > m) throw IndexOutOfRange("x" + std::to_string(i) + " with m=" + std::to_string(m));
  Monomial mono;
  mono.x[i - 1] = 1;
  return monomial(m, mono, Scalar(f, 1));
}

WeylOp WeylOp::d(int m, Field f, int i) {
  if (i < 1 || i > m) throw IndexOutOfRange("d" + std::to_string(i) + " with m=" + std::to_string(m));
  Monomial mono;
  mono.d[i - 1] = 1;
  return monomial(m, mono, Scalar(f, 1));
}

WeylOp WeylOp::monomial(int m, const Monomial& mono, const Scalar& c) {
  WeylOp r(m, c.field());
  r.add_term(mono, c);
  return r;
}

WeylOp WeylOp::with_ka(const VarIndexSet& ka) const {
  if (!derivation_support().subset_of(ka)) {
    throw InvalidArgument("operator uses derivations outside " + ka.str());
  }
  WeylOp r = *this;
  r.ka_ = ka;
  return r;
}

VarIndexSet WeylOp::derivation_support() const {
  VarIndexSet s(m_);
  for (const auto& [mono, c] : terms_)
    for (int i = 0; i < m_; ++i) {
      if (mono.d[i]) s = s.with(i + 1);
    }
  return s;
}

void WeylOp::add_term(const Monomial& mono, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::pair<Monomial, Scalar> WeylOp::leading_term() const {
  if (terms_.empty()) throw InvalidArgument("leading term of the zero operator");
  return *terms_.rbegin();
}

Scalar WeylOp::coefficient(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Scalar(field_) : it->second;
}

void WeylOp::check_compatible(const WeylOp& o) const {
  if (!(field_ == o.field_)) throw FieldMismatch(field_.name() + " vs " + o.field_.name());
  if (m_ != o.m_) throw InvalidArgument("operators over different numbers of variables");
}

WeylOp& WeylOp::operator+=(const WeylOp& o) {
  check_compatible(o);
  ka_ = ka_ | o.ka_;
  for (const auto& [mono, c] : o.terms_) add_term(mono, c);
  return *this;
}

WeylOp& WeylOp::operator-=(const WeylOp& o) {
  check_compatible(o);
  ka_ = ka_ | o.ka_;
  for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
  return *this;
}

WeylOp WeylOp::operator+(const WeylOp& o) const {
  WeylOp r = *this;
  r += o;
  return r;
}

WeylOp WeylOp::operator-(const WeylOp& o) const {
  WeylOp r = *this;
  r -= o;
  return r;
}

WeylOp WeylOp::operator-() const {
  WeylOp r(m_, field_, ka_);
  for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, -c);
  return r;
}

WeylOp WeylOp::operator*(const Scalar& c) const {
  WeylOp r(m_, field_, ka_);
  if (c.is_zero()) return r;
  for (const auto& [mono, v] : terms_) r.terms_.emplace(mono, v * c);
  return r;
}

bool WeylOp::operator==(const WeylOp& o) const {
  return m_ == o.m_ && field_ == o.field_ && terms_ == o.terms_;
}

WeylOp WeylOp::monic() const {
  if (is_zero()) return *this;
  return *this * leading_term().second.inv();
}

namespace {

// D^k X^j = sum_r C(k,r) C(j,r) r! X^(j-r) D^(k-r); this is the r-th weight.
const mpz_class& commutation_weight(int k, int j, int r) {
  thread_local std::unordered_map<std::uint64_t, mpz_class> cache;
  std::uint64_t key = (static_cast<std::uint64_t>(k) << 40) | (static_cast<std::uint64_t>(j) << 20) |
                      static_cast<std::uint64_t>(r);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  mpz_class ck, cj, fr;
  mpz_bin_uiui(ck.get_mpz_t(), k, r);
  mpz_bin_uiui(cj.get_mpz_t(), j, r);
  mpz_fac_ui(fr.get_mpz_t(), r);
  return cache.emplace(key, ck * cj * fr).first->second;
}

struct Swap {
  int var;
  int k; // D exponent on the left
  int j; // X exponent on the right
};

} // namespace

WeylOp WeylOp::operator*(const WeylOp& o) const {
  check_compatible(o);
  WeylOp r(m_, field_, ka_ | o.ka_);
  std::vector<Swap> swaps;
  std::vector<int> idx;
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) {
      Scalar c = ca * cb;
      swaps.clear();
      Monomial base;
      for (int i = 0; i < m_; ++i) {
        base.x[i] = static_cast<std::uint16_t>(a.x[i] + b.x[i]);
        base.d[i] = static_cast<std::uint16_t>(a.d[i] + b.d[i]);
        if (a.d[i] && b.x[i]) swaps.push_back({i, a.d[i], b.x[i]});
      }
      if (swaps.empty()) {
        r.add_term(base, c);
        continue;
      }
      // enumerate r_i in [0, min(k_i, j_i)] for each swapped variable
      idx.assign(swaps.size(), 0);
      while (true) {
        Monomial mono = base;
        mpz_class w = 1;
        for (std::size_t s = 0; s < swaps.size(); ++s) {
          int rr = idx[s];
          if (rr) {
            mono.x[swaps[s].var] = static_cast<std::uint16_t>(mono.x[swaps[s].var] - rr);
            mono.d[swaps[s].var] = static_cast<std::uint16_t>(mono.d[swaps[s].var] - rr);
            w *= commutation_weight(swaps[s].k, swaps[s].j, rr);
          }
        }
        r.add_term(mono, w == 1 ? c : c * Scalar(field_, w));
        std::size_t s = 0;
        while (s < swaps.size()) {
          if (idx[s] < std::min(swaps[s].k, swaps[s].j)) {
            ++idx[s];
            break;
          }
          idx[s] = 0;
          ++s;
        }
        if (s == swaps.size()) break;
      }
    }
  }
  return r;
}

WeylOp normal_order_product(const WeylOp& a, const WeylOp& b) { return a * b; }

WeylOp linear_combine(const std::vector<Scalar>& coeffs, const std::vector<WeylOp>& ops) {
  if (coeffs.size() != ops.size()) throw InvalidArgument("coefficient and operator counts differ");
  if (ops.empty()) throw InvalidArgument("empty linear combination");
  WeylOp r(ops.front().m(), ops.front().field(), VarIndexSet::empty(ops.front().m()));
  for (std::size_t i = 0; i < ops.size(); ++i) r += ops[i] * coeffs[i];
  return r;
}

// ---------------------------------------------------------------- degrees

int filtration_degree(const WeylOp& a, DegreeKind kind, const std::optional<VarIndexSet>& k) {
  if ((kind == DegreeKind::OrdK || kind == DegreeKind::DegK) && !k) {
    throw MissingK("ordK/degK need an index set K");
  }
  int best = -1;
  for (const auto& [mono, c] : a.terms()) {
    int v = 0;
    switch (kind) {
    case DegreeKind::Bernstein:
      v = mono.total();
      break;
    case DegreeKind::OrdD:
      v = mono.ddegree();
      break;
    case DegreeKind::OrdK:
      for (int i = 0; i < a.m(); ++i) {
        if (!k->contains(i + 1)) v += mono.d[i];
      }
      break;
    case DegreeKind::DegK:
      v = mono.xdegree();
      for (int i = 0; i < a.m(); ++i) {
        if (k->contains(i + 1)) v += mono.d[i];
      }
      break;
    }
    best = std::max(best, v);
  }
  return best;
}

int d_degree(const WeylOp& a, int gamma) {
  int best = -1;
  for (const auto& [mono, c] : a.terms()) best = std::max(best, static_cast<int>(mono.d[gamma - 1]));
  return best;
}

WeylOp d_power(int m, Field f, const Exponents& s) {
  Monomial mono;
  mono.d = s;
  return WeylOp::monomial(m, mono, Scalar(f, 1));
}

std::map<Exponents, WeylOp> left_decompose(const WeylOp& h, const VarIndexSet& outside) {
  const int m = h.m();
  std::map<Exponents, WeylOp> out;
  WeylOp rest = h;
  auto outside_order = [&](const Monomial& mono) {
    int s = 0;
    for (int i = 0; i < m; ++i) {
      if (outside.contains(i + 1)) s += mono.d[i];
    }
    return s;
  };
  while (!rest.is_zero()) {
    // any term of maximal outside order; its D^S-multiple only adds terms of
    // strictly smaller outside order
    const Monomial* pick = nullptr;
    int best = -1;
    for (const auto& [mono, c] : rest.terms()) {
      int o = outside_order(mono);
      if (o > best) {
        best = o;
        pick = &mono;
      }
    }
    Monomial inner = *pick;
    Exponents s{};
    for (int i = 0; i < m; ++i) {
      if (outside.contains(i + 1)) {
        s[i] = inner.d[i];
        inner.d[i] = 0;
      }
    }
    Scalar c = rest.coefficient(*pick);
    WeylOp piece = WeylOp::monomial(m, inner, c);
    auto [it, inserted] = out.try_emplace(s, WeylOp(m, h.field()));
    it->second += piece;
    rest -= d_power(m, h.field(), s) * piece;
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

std::vector<std::pair<int, WeylOp>> gamma_decompose(const WeylOp& h, int gamma) {
  if (gamma < 1 || gamma > h.m()) throw IndexOutOfRange("gamma " + std::to_string(gamma));
  VarIndexSet outside = VarIndexSet(h.m(), {gamma});
  std::vector<std::pair<int, WeylOp>> out;
  for (auto& [s, coeff] : left_decompose(h, outside)) out.emplace_back(s[gamma - 1], coeff);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

// ------------------------------------------------------------ transforms

WeylOp omega_transform(const WeylOp& h, const ScalarMatrix& omega, const VarIndexSet& k) {
  const int m = h.m();
  const Field f = h.field();
  std::vector<int> idx = k.complement().members();
  const std::size_t n = idx.size();
  if (omega.rows() != n || omega.cols() != n) {
    throw InvalidArgument("Omega must be square of size m - |K| = " + std::to_string(n));
  }
  ScalarMatrix w;
  try {
    w = inverse(omega.transpose());
  } catch (const DivisionByZero&) {
    throw SingularOmega("Omega is not invertible");
  }
  std::vector<int> pos(m + 1, -1);
  for (std::size_t a = 0; a < n; ++a) pos[idx[a]] = static_cast<int>(a);

  std::vector<WeylOp> ximg(m + 1), dimg(m + 1);
  for (int i = 1; i <= m; ++i) {
    if (pos[i] < 0) {
      ximg[i] = WeylOp::x(m, f, i);
      dimg[i] = WeylOp::d(m, f, i);
      continue;
    }
    auto a = static_cast<std::size_t>(pos[i]);
    ximg[i] = WeylOp(m, f);
    dimg[i] = WeylOp(m, f);
    for (std::size_t b = 0; b < n; ++b) {
      ximg[i] += WeylOp::x(m, f, idx[b]) * w.at(a, b);
      dimg[i] += WeylOp::d(m, f, idx[b]) * omega.at(a, b);
    }
  }
  std::map<std::pair<int, int>, WeylOp> xpow, dpow;
  auto power = [&](std::map<std::pair<int, int>, WeylOp>& cache, const WeylOp& base, int var, int e) {
    auto key = std::make_pair(var, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    WeylOp p = WeylOp::constant(m, f, 1);
    for (int t = 0; t < e; ++t) p = p * base;
    cache.emplace(key, p);
    return p;
  };
  WeylOp out(m, f, h.ka());
  for (const auto& [mono, c] : h.terms()) {
    WeylOp xs = WeylOp::constant(m, c);
    WeylOp ds = WeylOp::constant(m, f, 1);
    for (int i = 1; i <= m; ++i) {
      if (mono.x[i - 1]) xs = xs * power(xpow, ximg[i], i, mono.x[i - 1]);
      if (mono.d[i - 1]) ds = ds * power(dpow, dimg[i], i, mono.d[i - 1]);
    }
    out += xs * ds;
  }
  return out;
}

Polynomial as_polynomial(const WeylOp& a) {
  Polynomial p(a.m(), a.field());
  for (const auto& [mono, c] : a.terms()) {
    if (mono.ddegree()) throw InvalidArgument("operator is not a polynomial");
    p.add_term(mono.x, c);
  }
  return p;
}

WeylOp from_polynomial(const Polynomial& p) {
  WeylOp r(p.nvars(), p.field());
  for (const auto& [e, c] : p.terms()) {
    Monomial mono;
    mono.x = e;
    r.add_term(mono, c);
  }
  return r;
}

Polynomial apply_to_polynomial(const WeylOp& a, const Polynomial& f) {
  if (!a.field().is_rational() || !f.field().is_rational()) {
    throw CharPUnsupported("the polynomial action is faithful only in characteristic 0");
  }
  Polynomial out(a.m(), a.field());
  for (const auto& [mono, c] : a.terms()) {
    Polynomial g = f;
    for (int i = 1; i <= a.m() && !g.is_zero(); ++i) {
      for (int t = 0; t < mono.d[i - 1]; ++t) g = g.derivative(i);
    }
    if (g.is_zero()) continue;
    Polynomial shifted(a.m(), a.field());
    for (const auto& [e, v] : g.terms()) {
      Exponents s = e;
      for (int i = 0; i < a.m(); ++i) s[i] = static_cast<std::uint16_t>(s[i] + mono.x[i]);
      shifted.add_term(s, v * c);
    }
    out = out + shifted;
  }
  return out;
}

WeylOp adjoint(const WeylOp& a) {
  const int m = a.m();
  WeylOp out(m, a.field(), a.ka());
  for (const auto& [mono, c] : a.terms()) {
    Monomial xs, ds;
    xs.x = mono.x;
    ds.d = mono.d;
    Scalar sign = (mono.ddegree() % 2) ? -c : c;
    out += WeylOp::monomial(m, ds, sign) * WeylOp::monomial(m, xs, Scalar(a.field(), 1));
  }
  return out;
}

// ------------------------------------------------------------------ OpMatrix

OpMatrix::OpMatrix(int m, Field f, std::size_t rows, std::size_t cols)
    : m_(m), field_(f), rows_(rows), cols_(cols), entries_(rows * cols, WeylOp(m, f)) {}

OpMatrix::OpMatrix(std::vector<std::vector<WeylOp>> rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidArgument("empty operator matrix");
  rows_ = rows.size();
  cols_ = rows.front().size();
  m_ = rows.front().front().m();
  field_ = rows.front().front().field();
  entries_.reserve(rows_ * cols_);
  for (auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ragged operator matrix");
    for (auto& e : r) {
      if (e.m() != m_) throw InvalidArgument("entries over different m");
      if (!(e.field() == field_)) throw FieldMismatch("matrix entries over different fields");
      entries_.push_back(std::move(e));
    }
  }
}

OpMatrix OpMatrix::operator*(const OpMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidArgument("operator matrix shapes do not conform");
  OpMatrix r(m_, field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (!o.at(k, j).is_zero()) r.at(i, j) += at(i, k) * o.at(k, j);
      }
    }
  return r;
}

bool OpMatrix::operator==(const OpMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

int OpMatrix::degree() const {
  int d = -1;
  for (const auto& e : entries_) d = std::max(d, bernstein_degree(e));
  return d;
}

bool OpMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const WeylOp& e) { return e.is_zero(); });
}

VarIndexSet OpMatrix::derivation_support() const {
  VarIndexSet s(m_);
  for (const auto& e : entries_) s = s | e.derivation_support();
  return s;
}

OpMatrix OpMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  OpMatrix r(m_, field_, rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) r.at(i, j) = at(rows[i], cols[j]);
  return r;
}

OpMatrix OpMatrix::without_column(std::size_t j) const {
  std::vector<std::size_t> rows(rows_), cols;
  for (std::size_t i = 0; i < rows_; ++i) rows[i] = i;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (c != j) cols.push_back(c);
  }
  return submatrix(rows, cols);
}

OpMatrix OpMatrix::transpose() const {
  OpMatrix r(m_, field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

} // namespace dmod
