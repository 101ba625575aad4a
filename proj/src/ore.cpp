#include "dmod/ore.hpp"

#include <algorithm>
#include <stdexcept>

#include "dmod/io.hpp"

namespace dmod {

FractionContext::FractionContext(int m_, Field f, VarIndexSet ka_, VarIndexSet kd_)
    : m(m_), field(f), ka(ka_), kd(kd_) {
  if (ka.m() != m || kd.m() != m) throw InvalidArgument("index sets built for a different m");
  if (!kd.subset_of(ka)) throw InvalidArgument("denominator set " + kd.str() + " not inside " + ka.str());
}

FractionContext FractionContext::standard(int m, Field f, const VarIndexSet& k) {
  return FractionContext(m, f, VarIndexSet::full(m), k);
}

std::string FractionContext::str() const {
  return "m=" + std::to_string(m) + " Ka=" + ka.str() + " Kd=" + kd.str() + " over " + field.name();
}

OreFraction::OreFraction(FractionContext ctx, WeylOp num, WeylOp den)
    : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ZeroDenominator("fraction with zero denominator");
  if (!num_.in_subalgebra(ctx_.ka)) throw InvalidArgument("numerator uses derivations outside " + ctx_.ka.str());
  if (!den_.in_subalgebra(ctx_.kd)) throw InvalidArgument("denominator uses derivations outside " + ctx_.kd.str());
  if (num_.is_zero()) {
    den_ = WeylOp::constant(ctx_.m, ctx_.field, 1);
  } else if (den_.size() == 1 && den_.terms().begin()->first == Monomial{}) {
    Scalar s = den_.terms().begin()->second.inv();
    num_ = num_ * s;
    den_ = WeylOp::constant(ctx_.m, ctx_.field, 1);
  }
}

OreFraction OreFraction::from_op(const FractionContext& ctx, const WeylOp& a) {
  return OreFraction(ctx, a, WeylOp::constant(ctx.m, ctx.field, 1));
}

OreFraction OreFraction::zero(const FractionContext& ctx) { return from_op(ctx, WeylOp(ctx.m, ctx.field)); }

std::string OreFraction::str() const {
  std::string n = to_string(num_);
  if (den_ == WeylOp::constant(ctx_.m, ctx_.field, 1)) return n;
  if (num_.size() > 1) n = "(" + n + ")";
  return n + " * (" + to_string(den_) + ")^-1";
}

long syzygy_degree_bound(int m, int k_size, std::size_t equations, int d) {
  return 2L * (m + k_size) * static_cast<long>(equations) * std::max(d, 0);
}

Syzygy syzygy(const OpMatrix& b, Side side, const VarIndexSet& k, std::optional<int> cap) {
  const int m = b.m();
  const Field f = b.field();
  const std::size_t nunk = side == Side::Right ? b.cols() : b.rows();
  const std::size_t neq = side == Side::Right ? b.rows() : b.cols();
  Syzygy out;
  out.bound = syzygy_degree_bound(m, k.size(), neq, b.degree());

  for (std::size_t j = 0; j < nunk; ++j) {
    bool zero = true;
    for (std::size_t e = 0; e < neq && zero; ++e) {
      zero = (side == Side::Right ? b.at(e, j) : b.at(j, e)).is_zero();
    }
    if (zero) {
      out.c.assign(nunk, WeylOp(m, f));
      out.c[j] = WeylOp::constant(m, f, 1);
      out.degree = 0;
      return out;
    }
  }

  std::vector<std::vector<WeylOp>> coeffs(b.rows(), std::vector<WeylOp>(b.cols()));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) coeffs[i][j] = b.at(i, j);
  const std::vector<VarIndexSet> algs(nunk, k);

  long limit = cap ? std::min<long>(*cap, out.bound) : out.bound;
  for (int deg = 0; deg <= limit; ++deg) {
    AnsatzSystem sys(m, f, side, coeffs, algs, deg);
    if (sys.kernel_trivial()) continue;
    auto v = sys.kernel_vector();
    if (!v) continue;
    out.c = sys.to_ops(*v);
    for (const auto& e : out.c) {
      if (e.is_zero()) continue;
      Scalar s = e.leading_term().second.inv();
      for (auto& x : out.c) x = x * s;
      break;
    }
    out.degree = deg;
    return out;
  }
  if (cap && *cap < out.bound) {
    throw UndecidedAtCap("no syzygy up to degree cap " + std::to_string(*cap) + " (bound " +
                         std::to_string(out.bound) + ")");
  }
  throw NotFoundWithinBound("no syzygy up to degree " + std::to_string(out.bound));
}

CommonMultiple common_multiple(const std::vector<WeylOp>& bs, Side side, const VarIndexSet& k,
                               std::optional<int> cap) {
  if (bs.empty()) throw InvalidArgument("common multiple of an empty list");
  for (const auto& b : bs) {
    if (b.is_zero()) throw InvalidArgument("common multiple with a zero element");
  }
  const int m = bs.front().m();
  const Field f = bs.front().field();
  const std::size_t p = bs.size();
  CommonMultiple out;
  if (std::all_of(bs.begin(), bs.end(), [&](const WeylOp& b) { return b == bs.front(); })) {
    out.c.assign(p, WeylOp::constant(m, f, 1));
    out.value = bs.front();
    out.degree = 0;
    return out;
  }
  if (p == 2) {
    // a nonzero constant divides everything on either side
    for (std::size_t i = 0; i < 2; ++i) {
      const WeylOp& s = bs[i];
      if (s.size() == 1 && s.terms().begin()->first == Monomial{}) {
        out.c.assign(2, WeylOp::constant(m, f, 1));
        out.c[i] = bs[1 - i] * s.terms().begin()->second.inv();
        out.value = bs[1 - i];
        out.degree = bernstein_degree(out.c[i]);
        out.bound = syzygy_degree_bound(m, k.size(), 1, std::max(bernstein_degree(bs[0]), bernstein_degree(bs[1])));
        return out;
      }
    }
  }
  OpMatrix mat = side == Side::Right ? OpMatrix(m, f, p - 1, p) : OpMatrix(m, f, p, p - 1);
  for (std::size_t i = 0; i + 1 < p; ++i) {
    if (side == Side::Right) {
      mat.at(i, 0) = bs[0];
      mat.at(i, i + 1) = -bs[i + 1];
    } else {
      mat.at(0, i) = bs[0];
      mat.at(i + 1, i) = -bs[i + 1];
    }
  }
  Syzygy syz = syzygy(mat, side, k, cap);
  out.c = std::move(syz.c);
  out.degree = syz.degree;
  out.bound = syz.bound;
  out.value = side == Side::Right ? bs[0] * out.c[0] : out.c[0] * bs[0];
  return out;
}

namespace {

std::vector<Exponents> exponents_up_to(const VarIndexSet& vars, int e) {
  std::vector<Exponents> out;
  std::vector<int> idx = vars.members();
  Exponents cur{};
  auto rec = [&](auto&& self, std::size_t s, int left) -> void {
    if (s == idx.size()) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[idx[s] - 1] = static_cast<std::uint16_t>(k);
      self(self, s + 1, left - k);
    }
    cur[idx[s] - 1] = 0;
  };
  rec(rec, 0, e);
  return out;
}

void check_same(const OreFraction& u, const OreFraction& v) {
  if (!(u.ctx() == v.ctx())) throw InvalidArgument("fractions from different contexts");
}

} // namespace

Swap swap_denominator(const WeylOp& b, const WeylOp& a, const FractionContext& ctx) {
  if (b.is_zero()) throw ZeroDenominator("swap_denominator with b = 0");
  const int m = ctx.m;
  const Field f = ctx.field;
  WeylOp one = WeylOp::constant(m, f, 1);
  if (a.is_zero()) return {WeylOp(m, f), one};
  if (b == a) return {one, one};
  if (b.size() == 1 && b.terms().begin()->first == Monomial{}) {
    return {a * b.terms().begin()->second.inv(), one};
  }
  const VarIndexSet outside = ctx.ka - ctx.kd;
  const int e = filtration_degree(a, DegreeKind::OrdK, ctx.kd);
  // alpha = sum_I D^I beta_I with |I| <= e over the derivations outside Kd
  std::vector<Exponents> is = exponents_up_to(outside, std::max(e, 0));
  std::map<Exponents, std::size_t> rows;
  std::vector<std::map<Exponents, WeylOp>> parts;
  for (const auto& i : is) {
    parts.push_back(left_decompose(b * d_power(m, f, i), outside));
    for (const auto& kv : parts.back()) rows.try_emplace(kv.first, 0);
  }
  auto a_parts = left_decompose(a, outside);
  for (const auto& kv : a_parts) rows.try_emplace(kv.first, 0);
  std::size_t r = 0;
  for (auto& kv : rows) kv.second = r++;

  OpMatrix mat(m, f, rows.size(), is.size() + 1);
  for (std::size_t c = 0; c < is.size(); ++c)
    for (const auto& [j, coeff] : parts[c]) mat.at(rows[j], c) = coeff;
  for (const auto& [j, coeff] : a_parts) mat.at(rows[j], is.size()) = -coeff;

  Syzygy syz = syzygy(mat, Side::Right, ctx.kd);
  Swap out{WeylOp(m, f), syz.c.back()};
  for (std::size_t c = 0; c < is.size(); ++c) {
    if (!syz.c[c].is_zero()) out.alpha += d_power(m, f, is[c]) * syz.c[c];
  }
  if (out.beta.is_zero() || !(b * out.alpha == a * out.beta)) {
    throw std::logic_error("swap_denominator produced an invalid pair");
  }
  return out;
}

OreFraction left_to_right(const FractionContext& ctx, const WeylOp& b, const WeylOp& a) {
  Swap s = swap_denominator(b, a, ctx);
  return OreFraction(ctx, s.alpha, s.beta);
}

OreFraction frac_add(const OreFraction& u, const OreFraction& v) {
  check_same(u, v);
  if (u.is_zero()) return v;
  if (v.is_zero()) return u;
  if (u.den() == v.den()) return OreFraction(u.ctx(), u.num() + v.num(), u.den());
  CommonMultiple cm = common_multiple({u.den(), v.den()}, Side::Right, u.ctx().kd);
  return OreFraction(u.ctx(), u.num() * cm.c[0] + v.num() * cm.c[1], cm.value);
}

OreFraction frac_neg(const OreFraction& u) { return OreFraction(u.ctx(), -u.num(), u.den()); }

OreFraction frac_sub(const OreFraction& u, const OreFraction& v) { return frac_add(u, frac_neg(v)); }

OreFraction frac_mul(const OreFraction& u, const OreFraction& v) {
  check_same(u, v);
  if (u.is_zero() || v.is_zero()) return OreFraction::zero(u.ctx());
  Swap s = swap_denominator(u.den(), v.num(), u.ctx());
  return OreFraction(u.ctx(), u.num() * s.alpha, v.den() * s.beta);
}

bool frac_eq(const OreFraction& u, const OreFraction& v, std::optional<int> cap) {
  check_same(u, v);
  if (u.den() == v.den()) return u.num() == v.num();
  if (u.is_zero() || v.is_zero()) return u.is_zero() && v.is_zero();
  CommonMultiple cm = common_multiple({u.den(), v.den()}, Side::Right, u.ctx().kd, cap);
  return u.num() * cm.c[0] == v.num() * cm.c[1];
}

} // namespace dmod
