#include "dmod/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

namespace dmod {

std::string to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Solved:
    return "SOLVED";
  case SolveStatus::Unsolvable:
    return "UNSOLVABLE";
  case SolveStatus::UndecidedAtCap:
    return "UNDECIDED_AT_CAP";
  }
  return "?";
}

// ------------------------------------------------------------ normalization

bool is_normalized(const WeylOp& h, int gamma, const VarIndexSet& fixed) {
  if (h.is_zero()) return true;
  return d_degree(h, gamma) == filtration_degree(h, DegreeKind::OrdK, fixed);
}

std::pair<NormalizationRecord, std::vector<WeylOp>> normalize_family(const std::vector<WeylOp>& h, int gamma,
                                                                     const VarIndexSet& fixed, std::mt19937_64& rng,
                                                                     int max_attempts) {
  if (fixed.contains(gamma)) throw InvalidArgument("gamma must be one of the transformed derivations");
  const Field f = h.empty() ? Field::rationals() : h.front().field();
  const std::size_t n = static_cast<std::size_t>(fixed.m() - fixed.size());
  NormalizationRecord rec;
  rec.fixed = fixed;
  rec.gamma = gamma;
  long range = 8;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    rec.attempts = attempt;
    ScalarMatrix omega = ScalarMatrix::identity(f, n);
    if (attempt > 1) {
      std::uniform_int_distribution<long> pick(-range, range);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) omega.at(i, j) = Scalar(f, pick(rng));
      range *= 2;
      if (rank(omega) < n) continue;
    }
    std::vector<WeylOp> out;
    out.reserve(h.size());
    bool ok = true;
    for (const auto& e : h) {
      out.push_back(omega_transform(e, omega, fixed));
      if (!is_normalized(out.back(), gamma, fixed)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rec.omega = omega;
      return {rec, out};
    }
  }
  throw RetryLimitExceeded("no normalizing transform in " + std::to_string(max_attempts) + " attempts");
}

std::pair<NormalizationRecord, std::vector<WeylOp>> normalize_family(const std::vector<WeylOp>& h, int gamma,
                                                                     const VarIndexSet& fixed, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return normalize_family(h, gamma, fixed, rng);
}

namespace {

Exponents gamma_power(int gamma, int s) {
  Exponents e{};
  e[gamma - 1] = static_cast<std::uint16_t>(s);
  return e;
}

OreFraction transform(const OreFraction& v, const ScalarMatrix& omega, const VarIndexSet& fixed) {
  return OreFraction(v.ctx(), omega_transform(v.num(), omega, fixed), omega_transform(v.den(), omega, fixed));
}

} // namespace

// --------------------------------------------------------- division by h

DivRem gamma_div_rem(const OreFraction& v, const WeylOp& h, int gamma) {
  const FractionContext& ctx = v.ctx();
  if (!ctx.ka.contains(gamma) || ctx.kd.contains(gamma)) {
    throw InvalidArgument("gamma must be a numerator-only derivation of the context");
  }
  if (h.is_zero()) throw DivisionByZero("division by the zero operator");
  const int t = d_degree(h, gamma);
  const WeylOp lc = gamma_decompose(h, gamma).front().second;
  if (!lc.in_subalgebra(ctx.kd)) throw NotNormalized("leading D" + std::to_string(gamma) + " coefficient is not invertible");
  const FractionContext inner(ctx.m, ctx.field, ctx.ka.without(gamma), ctx.kd);

  OreFraction phi = OreFraction::zero(ctx);
  OreFraction rest = v;
  while (!rest.is_zero()) {
    const int t1 = d_degree(rest.num(), gamma);
    if (t1 < t) break;
    const WeylOp top = gamma_decompose(rest.num(), gamma).front().second;
    // lc^{-1} top = alpha beta^{-1}
    Swap sw = swap_denominator(lc, top, inner);
    OreFraction step(ctx, d_power(ctx.m, ctx.field, gamma_power(gamma, t1 - t)) * sw.alpha, rest.den() * sw.beta);
    phi = frac_add(phi, step);
    rest = frac_sub(rest, OreFraction(ctx, h * step.num(), step.den()));
    if (!rest.is_zero() && d_degree(rest.num(), gamma) >= t1) {
      throw std::logic_error("division step did not lower the D_gamma degree");
    }
  }
  return {phi, rest};
}

// ------------------------------------------------------------- elimination

Elimination eliminate_gamma(const Trapezoid& sys, int gamma, std::mt19937_64& rng) {
  const FractionContext& ctx = sys.ctx;
  if (!ctx.ka.contains(gamma) || ctx.kd.contains(gamma)) {
    throw InvalidArgument("eliminated derivation must lie in Ka minus Kd");
  }
  const int m = ctx.m;
  const Field f = ctx.field;
  const std::size_t r = sys.r, p = sys.p();
  const VarIndexSet fixed = (ctx.ka - ctx.kd).complement();

  Elimination el;
  el.input = sys;
  el.gamma = gamma;

  // h^(i): g_j h_j + g_{j,i} h = 0 for every pivot row j
  std::vector<std::vector<WeylOp>> hvec;
  for (std::size_t i = r; i < p; ++i) {
    if (r == 0) {
      hvec.push_back({WeylOp::constant(m, f, 1)});
      continue;
    }
    OpMatrix mat(m, f, r, r + 1);
    for (std::size_t j = 0; j < r; ++j) {
      mat.at(j, j) = sys.g.at(j, j);
      mat.at(j, r) = sys.g.at(j, i);
    }
    hvec.push_back(syzygy(mat, Side::Right, ctx.ka).c);
  }

  std::vector<WeylOp> family;
  for (const auto& h : hvec) family.push_back(h.back());
  for (std::size_t j = 0; j < r; ++j) family.push_back(sys.g.at(j, j));
  el.norm = normalize_family(family, gamma, fixed, rng).first;
  auto tr = [&](const WeylOp& a) { return omega_transform(a, el.norm.omega, fixed); };

  el.gbar = OpMatrix(m, f, r, p);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < p; ++k) el.gbar.at(j, k) = tr(sys.g.at(j, k));
  for (const auto& x : sys.f) el.fbar.push_back(tr(x));
  for (const auto& h : hvec) {
    std::vector<WeylOp> t;
    for (const auto& x : h) t.push_back(tr(x));
    el.hbar.push_back(std::move(t));
  }

  el.slots.assign(p, 0);
  for (std::size_t i = r; i < p; ++i) el.slots[i] = d_degree(el.hbar[i - r].back(), gamma);
  for (std::size_t j = 0; j < r; ++j) {
    int top = d_degree(el.fbar[j], gamma);
    for (std::size_t i = r; i < p; ++i) {
      if (el.slots[i] > 0 && !el.gbar.at(j, i).is_zero()) {
        top = std::max(top, d_degree(el.gbar.at(j, i), gamma) + el.slots[i] - 1);
      }
    }
    el.slots[j] = std::max(top - d_degree(el.gbar.at(j, j), gamma) + 1, 0);
  }
  std::size_t total = 0;
  for (std::size_t k = 0; k < p; ++k) {
    el.offset.push_back(total);
    total += static_cast<std::size_t>(el.slots[k]);
  }
  if (total > limits().max_unknowns) {
    throw ResourceCap("elimination of D" + std::to_string(gamma) + " needs " + std::to_string(total) + " unknowns");
  }

  // equate right coefficients of D_gamma^w in every row
  std::map<std::pair<std::size_t, int>, std::map<std::size_t, WeylOp>> rows;
  std::map<std::pair<std::size_t, int>, WeylOp> rhs;
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const WeylOp& c = el.gbar.at(j, k);
      if (c.is_zero()) continue;
      for (int s = 0; s < el.slots[k]; ++s) {
        for (auto& [w, coeff] : gamma_decompose(c * d_power(m, f, gamma_power(gamma, s)), gamma)) {
          rows[{j, w}][el.offset[k] + static_cast<std::size_t>(s)] = coeff;
        }
      }
    }
    for (auto& [w, coeff] : gamma_decompose(el.fbar[j], gamma)) {
      rows[{j, w}];
      rhs[{j, w}] = coeff;
    }
  }
  OpMatrix a(m, f, rows.size(), total);
  std::vector<WeylOp> b;
  std::size_t row = 0;
  for (const auto& [key, entries] : rows) {
    for (const auto& [col, coeff] : entries) a.at(row, col) = coeff;
    auto it = rhs.find(key);
    b.push_back(it == rhs.end() ? WeylOp(m, f) : it->second);
    ++row;
  }
  el.emitted = LinearSystem(FractionContext(m, f, ctx.ka.without(gamma), ctx.kd), std::move(a), std::move(b));
  return el;
}

std::vector<OreFraction> Elimination::lift(const std::vector<OreFraction>& psi) const {
  const FractionContext& ctx = input.ctx;
  const VarIndexSet& fixed = norm.fixed;
  const ScalarMatrix back = inverse(norm.omega);
  std::vector<OreFraction> out(input.p(), OreFraction::zero(ctx));
  for (std::size_t k = 0; k < input.p(); ++k) {
    OreFraction vbar = OreFraction::zero(ctx);
    for (int s = 0; s < slots[k]; ++s) {
      const OreFraction& part = psi[offset[k] + static_cast<std::size_t>(s)];
      if (part.is_zero()) continue;
      vbar = frac_add(vbar, OreFraction(ctx, d_power(ctx.m, ctx.field, gamma_power(gamma, s)) * part.num(), part.den()));
    }
    out[input.col_perm[k]] = transform(vbar, back, fixed);
  }
  return out;
}

std::vector<OreFraction> Elimination::project(const std::vector<OreFraction>& v) const {
  const FractionContext& ctx = input.ctx;
  const std::size_t r = input.r, p = input.p();
  std::vector<OreFraction> vbar;
  for (std::size_t k = 0; k < p; ++k) vbar.push_back(transform(v[input.col_perm[k]], norm.omega, norm.fixed));
  for (std::size_t i = r; i < p; ++i) {
    const auto& h = hbar[i - r];
    DivRem dr = gamma_div_rem(vbar[i], h.back(), gamma);
    vbar[i] = dr.psi;
    if (dr.phi.is_zero()) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (!h[j].is_zero()) vbar[j] = frac_add(vbar[j], OreFraction(ctx, h[j] * dr.phi.num(), dr.phi.den()));
    }
  }
  const FractionContext& inner = emitted.ctx;
  std::vector<OreFraction> psi(emitted.unknowns(), OreFraction::zero(inner));
  for (std::size_t k = 0; k < p; ++k) {
    for (auto& [s, coeff] : gamma_decompose(vbar[k].num(), gamma)) {
      if (s >= slots[k]) throw std::logic_error("projected unknown exceeds its D_gamma degree bound");
      psi[offset[k] + static_cast<std::size_t>(s)] = OreFraction(inner, coeff, vbar[k].den());
    }
  }
  return psi;
}

// ---------------------------------------------------------------- solving

namespace {

void cert(std::vector<Certificate>& out, const std::string& stage, const std::string& name, const std::string& value) {
  out.push_back({stage, name, value});
}

std::string describe(const mpz_class& z) {
  std::string s = z.get_str();
  if (s.size() <= 40) return s;
  return "~10^" + std::to_string(s.size() - 1);
}

std::vector<OreFraction> base_solution(const Trapezoid& t) {
  std::vector<OreFraction> v(t.p(), OreFraction::zero(t.ctx));
  for (std::size_t j = 0; j < t.r; ++j) v[t.col_perm[j]] = left_to_right(t.ctx, t.g.at(j, j), t.f[j]);
  return v;
}

int solution_degree(const std::vector<OreFraction>& sol) {
  int d = -1;
  for (const auto& v : sol) d = std::max({d, v.num_degree(), v.den_degree()});
  return d;
}

void finish(const LinearSystem& sys, SolveOutcome& out) {
  if (!verify_solution(sys, out.solution)) throw std::logic_error("solver produced a solution that does not verify");
  int deg = solution_degree(out.solution);
  mpz_class bound = bounds::theorem_solution(sys.ctx.m, sys.ctx.kd.size(), std::max(sys.degree(), 1),
                                             static_cast<int>(sys.unknowns()), static_cast<int>(sys.equations()));
  cert(out.certificates, "result", "solution_degree", std::to_string(deg));
  cert(out.certificates, "result", "theorem_bound", describe(bound));
  cert(out.certificates, "result", "within_bound", deg <= bound ? "true" : "false");
}

std::optional<std::vector<OreFraction>> solve_rec(const LinearSystem& sys, std::mt19937_64& rng,
                                                  std::vector<Certificate>& certs, int depth) {
  const std::string stage = "level" + std::to_string(depth);
  cert(certs, stage, "context", sys.ctx.str());
  cert(certs, stage, "shape", std::to_string(sys.equations()) + "x" + std::to_string(sys.unknowns()));
  cert(certs, stage, "degree", std::to_string(sys.degree()));
  auto trap = trapezoid_reduce(sys);
  if (!trap) {
    cert(certs, stage, "verdict", "inconsistent dependent row");
    return std::nullopt;
  }
  cert(certs, stage, "rank", std::to_string(trap->r));
  cert(certs, stage, "trapezoid_degree", std::to_string(trap->degree()));
  if (sys.ctx.ka == sys.ctx.kd) return base_solution(*trap);

  const int gamma = (sys.ctx.ka - sys.ctx.kd).members().front();
  Elimination el = eliminate_gamma(*trap, gamma, rng);
  const int d = std::max(trap->degree(), 1);
  const int rr = static_cast<int>(std::max<std::size_t>(trap->r, 1));
  cert(certs, stage, "gamma", std::to_string(gamma));
  cert(certs, stage, "omega_attempts", std::to_string(el.norm.attempts));
  cert(certs, stage, "emitted_unknowns", std::to_string(el.emitted.unknowns()));
  cert(certs, stage, "emitted_equations", std::to_string(el.emitted.equations()));
  cert(certs, stage, "indeterminate_bound",
       describe(bounds::elimination(sys.ctx.m, rr, d) * static_cast<long>(std::max<std::size_t>(trap->p(), 1))));
  cert(certs, stage, "n4", describe(bounds::n4(sys.ctx.m, sys.ctx.kd.size(), d, rr)));
  auto sub = solve_rec(el.emitted, rng, certs, depth + 1);
  if (!sub) return std::nullopt;
  return el.lift(*sub);
}

} // namespace

SolveOutcome base_solve_skew(const LinearSystem& sys) {
  if (!(sys.ctx.ka == sys.ctx.kd)) throw InvalidArgument("base case needs Ka == Kd");
  SolveOutcome out;
  auto trap = trapezoid_reduce(sys);
  if (!trap) {
    out.status = SolveStatus::Unsolvable;
    return out;
  }
  cert(out.certificates, "base", "rank", std::to_string(trap->r));
  out.solution = base_solution(*trap);
  out.status = SolveStatus::Solved;
  finish(sys, out);
  return out;
}

SolveOutcome decide_solve(const LinearSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SolveOutcome out;
  WorkBudget budget(limits().max_work);
  try {
    auto sol = solve_rec(sys, rng, out.certificates, 0);
    if (!sol) {
      out.status = SolveStatus::Unsolvable;
    } else {
      out.solution = std::move(*sol);
      out.status = SolveStatus::Solved;
      finish(sys, out);
    }
  } catch (const ResourceCap& e) {
    out = SolveOutcome{SolveStatus::UndecidedAtCap, {}, std::move(out.certificates), e.what()};
  } catch (const UndecidedAtCap& e) {
    out = SolveOutcome{SolveStatus::UndecidedAtCap, {}, std::move(out.certificates), e.what()};
  }
  cert(out.certificates, "result", "work_steps", std::to_string(budget.used()));
  return out;
}

std::vector<int> default_schedule() { return {0, 1, 2, 3, 4, 5, 6, 7, 8}; }

SolveOutcome ansatz_solve(const LinearSystem& sys, const std::vector<int>& schedule) {
  const FractionContext& ctx = sys.ctx;
  const std::size_t p = sys.unknowns(), q = sys.equations();
  SolveOutcome out;
  // unknown 0 is the shared denominator b, then c_1..c_p
  std::vector<std::vector<WeylOp>> coeffs(q, std::vector<WeylOp>(p + 1));
  for (std::size_t j = 0; j < q; ++j) {
    coeffs[j][0] = -sys.rhs[j];
    for (std::size_t i = 0; i < p; ++i) coeffs[j][i + 1] = sys.a.at(j, i);
  }
  std::vector<VarIndexSet> algs(p + 1, ctx.ka);
  algs[0] = ctx.kd;
  int reached = -1;
  for (int deg : schedule) {
    try {
      AnsatzSystem ans(ctx.m, ctx.field, Side::Right, coeffs, algs, deg);
      reached = std::max(reached, deg);
      cert(out.certificates, "ansatz", "degree_" + std::to_string(deg), std::to_string(ans.columns()) + " coefficients");
      if (ans.kernel_trivial()) continue;
      const std::size_t b_end = ans.begin(1);
      auto v = ans.kernel_vector([b_end](const std::vector<std::uint64_t>& x) {
        return std::any_of(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(b_end), [](std::uint64_t e) { return e != 0; });
      });
      if (v) {
        auto ops = ans.to_ops(*v);
        for (std::size_t i = 0; i < p; ++i) out.solution.emplace_back(ctx, ops[i + 1], ops[0]);
        std::vector<WeylOp> c(ops.begin() + 1, ops.end());
        if (!verify_solution(sys, c, ops[0])) throw std::logic_error("ansatz kernel vector does not verify");
        out.status = SolveStatus::Solved;
        cert(out.certificates, "ansatz", "found_at_degree", std::to_string(deg));
        return out;
      }
    } catch (const ResourceCap& e) {
      out.note = e.what();
      break;
    }
  }
  mpz_class n5 = bounds::theorem_solution(ctx.m, ctx.kd.size(), std::max(sys.degree(), 1), static_cast<int>(p),
                                          static_cast<int>(q));
  mpz_class needed = bounds::final_ansatz(ctx.m, ctx.kd.size(), static_cast<int>(p), n5);
  cert(out.certificates, "ansatz", "exhaustive_degree", describe(needed));
  out.status = (reached >= 0 && needed <= reached && out.note.empty()) ? SolveStatus::Unsolvable
                                                                       : SolveStatus::UndecidedAtCap;
  return out;
}

bool verify_solution(const LinearSystem& sys, const std::vector<WeylOp>& c, const WeylOp& b) {
  if (b.is_zero()) throw ZeroDenominator("shared denominator is zero");
  if (c.size() != sys.unknowns()) throw InvalidArgument("solution length does not match the unknowns");
  for (std::size_t j = 0; j < sys.equations(); ++j) {
    WeylOp lhs(sys.ctx.m, sys.ctx.field);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!sys.a.at(j, i).is_zero() && !c[i].is_zero()) lhs += sys.a.at(j, i) * c[i];
    }
    if (!(lhs == sys.rhs[j] * b)) return false;
  }
  return true;
}

bool verify_solution(const LinearSystem& sys, const std::vector<OreFraction>& sol) {
  if (sol.size() != sys.unknowns()) throw InvalidArgument("solution length does not match the unknowns");
  const FractionContext& ctx = sys.ctx;
  if (sol.empty()) return verify_solution(sys, {}, WeylOp::constant(ctx.m, ctx.field, 1));
  std::vector<WeylOp> dens;
  for (const auto& v : sol) dens.push_back(v.den());
  CommonMultiple cm = common_multiple(dens, Side::Right, ctx.kd);
  std::vector<WeylOp> c;
  for (std::size_t i = 0; i < sol.size(); ++i) c.push_back(sol[i].num() * cm.c[i]);
  return verify_solution(sys, c, cm.value);
}

namespace bounds {

namespace {
mpz_class ipow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}
unsigned long upow(unsigned long base, int e) {
  unsigned long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}
void check(int m, int k) {
  if (m < 1 || k < 0 || k > m) throw InvalidArgument("need 1 <= m and 0 <= |K| <= m");
}
} // namespace

mpz_class lemma_vector(int m, int k, int p, int d) {
  check(m, k);
  return mpz_class(2) * (m + k) * std::max(p - 1, 0) * d;
}

mpz_class theorem_solution(int m, int k, int d, int p, int q) {
  check(m, k);
  mpz_class mn = std::min(p, q);
  mpz_class base = mpz_class(16) * ipow(m, 4) * d * d * mn * mn;
  return ipow(base, upow(4, m - k));
}

mpz_class elimination(int m, int r, int d) { return mpz_class(16) * m * m * r * r * d; }

mpz_class n4(int m, int k, int d, int r) {
  check(m, k);
  return ipow(2 * m, upow(4, m - k)) * ipow(mpz_class(d) * r, upow(3, m - k));
}

mpz_class final_ansatz(int m, int k, int p, const mpz_class& n5) {
  check(m, k);
  return (mpz_class(2) * (m + k) * p + 1) * n5;
}

} // namespace bounds

} // namespace dmod
