// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// All comparisons are exact (rational arithmetic); the only tolerances are the
// wall-clock limits below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dmod/hilbert.hpp"
#include "dmod/io.hpp"
#include "dmod/solver.hpp"
#include "random_ops.hpp"

using namespace dmod;
using testing::random_nonzero_op;
using testing::random_op;
using testing::random_poly;

namespace {

const Field Q = Field::rationals();

constexpr double kLimit1 = 120, kLimit2 = 600, kLimit3 = 600, kLimit4 = 600;
constexpr double kLimit5 = 1200, kLimit6 = 300, kLimit7 = 1800, kLimit8 = 10;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, double limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  char timing[96];
  std::snprintf(timing, sizeof timing, "%.1f s, limit %.0f s%s", secs, limit, in_time ? "" : " EXCEEDED");
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << " (" << title << "): " << out.detail << " ["
            << timing << "]" << std::endl;
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

VarIndexSet random_subset(std::mt19937_64& rng, int m) {
  VarIndexSet k(m);
  for (int i = 1; i <= m; ++i) {
    if (rng() % 2) k = k.with(i);
  }
  return k;
}

int max_degree(const OpMatrix& a) {
  int d = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) d = std::max(d, bernstein_degree(a.at(i, j)));
  return d;
}

OpMatrix column(const std::vector<WeylOp>& c) {
  std::vector<std::vector<WeylOp>> rows;
  for (const auto& e : c) rows.push_back({e});
  return OpMatrix(rows);
}

Outcome multiplication_oracle() {
  std::mt19937_64 rng(101);
  int mismatches = 0, checks = 0;
  for (int pair = 0; pair < 500; ++pair) {
    const int m = uniform(rng, 1, 3);
    const auto full = VarIndexSet::full(m);
    const WeylOp a = random_op(rng, m, Q, full, uniform(rng, 0, 4), uniform(rng, 1, 4));
    const WeylOp b = random_op(rng, m, Q, full, uniform(rng, 0, 4), uniform(rng, 1, 4));
    const WeylOp ab = a * b;
    for (int k = 0; k < 5; ++k) {
      const Polynomial f = random_poly(rng, m, Q, uniform(rng, 0, 4));
      ++checks;
      if (!(apply_to_polynomial(ab, f) == apply_to_polynomial(a, apply_to_polynomial(b, f)))) ++mismatches;
    }
  }
  return {mismatches == 0, "500 pairs, " + std::to_string(checks) + " polynomial checks, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome syzygy_bound() {
  std::mt19937_64 rng(202);
  int bad = 0, worst_slack = 1 << 30;
  long total_degree = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int m = 1 + inst % 2;
    const VarIndexSet k(m, [&] {
      std::vector<int> idx;
      const int mask = (inst / 2) % (1 << m);
      for (int i = 1; i <= m; ++i)
        if (mask & (1 << (i - 1))) idx.push_back(i);
      return idx;
    }());
    const int p = uniform(rng, 2, 3);
    OpMatrix b(m, Q, static_cast<std::size_t>(p - 1), static_cast<std::size_t>(p));
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(p); ++i)
      for (std::size_t j = 0; j < static_cast<std::size_t>(p); ++j)
        b.at(i, j) = random_op(rng, m, Q, k, uniform(rng, 1, 2), 2);
    const int d = max_degree(b);
    const Syzygy s = syzygy(b, Side::Right, k);
    const mpz_class bound = bounds::lemma_vector(m, k.size(), p, d);
    bool nonzero = false, inside = true;
    for (const auto& c : s.c) {
      nonzero = nonzero || !c.is_zero();
      inside = inside && c.in_subalgebra(k);
    }
    const bool ok = nonzero && inside && mpz_class(s.degree) <= bound && (b * column(s.c)).is_zero();
    if (!ok) ++bad;
    total_degree += s.degree;
    worst_slack = std::min(worst_slack, static_cast<int>(bound.get_si()) - s.degree);
  }
  std::ostringstream os;
  os << "100 instances, " << bad << " failures, mean degree " << total_degree / 100.0 << ", min slack to bound "
     << worst_slack;
  return {bad == 0, os.str()};
}

Outcome fraction_laws() {
  std::mt19937_64 rng(303);
  int bad = 0;
  auto fraction = [&](const FractionContext& ctx) {
    return OreFraction(ctx, random_op(rng, ctx.m, Q, ctx.ka, uniform(rng, 0, 2), 2),
                       random_nonzero_op(rng, ctx.m, Q, ctx.kd, uniform(rng, 0, 2), 2));
  };
  auto rescale = [&](const OreFraction& u) {
    const WeylOp c = random_nonzero_op(rng, u.ctx().m, Q, u.ctx().kd, uniform(rng, 0, 1), 2);
    return OreFraction(u.ctx(), u.num() * c, u.den() * c);
  };
  int equal_pairs = 0;
  for (int i = 0; i < 200; ++i) {
    const int m = uniform(rng, 1, 2);
    const auto ctx = FractionContext::standard(m, Q, random_subset(rng, m));
    const OreFraction u = fraction(ctx), v = fraction(ctx);
    const OreFraction u2 = rescale(u), v2 = rescale(v);
    const bool uv = frac_eq(u, v);
    equal_pairs += uv;
    const bool ok = frac_eq(u, u) && uv == frac_eq(v, u) && frac_eq(u, u2) && frac_eq(u2, u) &&
                    frac_eq(frac_add(u, v), frac_add(u2, v2)) && frac_eq(frac_mul(u, v), frac_mul(u2, v2));
    if (!ok) ++bad;
  }
  return {bad == 0, "200 fractions, " + std::to_string(bad) + " law violations (" + std::to_string(equal_pairs) +
                        " random pairs happened to be equal)"};
}

Outcome quasi_inverse() {
  std::mt19937_64 rng(404);
  int bad = 0, made = 0, singular = 0;
  while (made < 50) {
    const int m = uniform(rng, 1, 2);
    const VarIndexSet k = random_subset(rng, m);
    const auto p = static_cast<std::size_t>(uniform(rng, 1, 3));
    OpMatrix b(m, Q, p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) b.at(i, j) = random_op(rng, m, Q, k, uniform(rng, 1, 2), 2);
    if (skew_rank(b, k).rank < p) {
      ++singular;
      continue;
    }
    ++made;
    const OpMatrix c = left_quasi_inverse(b, k);
    const OpMatrix cb = c * b;
    const mpz_class bound = bounds::lemma_vector(m, k.size(), static_cast<int>(p), max_degree(b));
    bool ok = mpz_class(max_degree(c)) <= bound;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        ok = ok && c.at(i, j).in_subalgebra(k);
        ok = ok && (i == j ? !cb.at(i, j).is_zero() : cb.at(i, j).is_zero());
      }
    }
    if (!ok) ++bad;
  }
  return {bad == 0, "50 non-singular matrices (" + std::to_string(singular) + " singular draws skipped), " +
                        std::to_string(bad) + " failures"};
}

LinearSystem single(const char* a, const char* rhs, const VarIndexSet& kd) {
  return LinearSystem(FractionContext::standard(1, Q, kd), OpMatrix({{parse_operator(a, 1, Q)}}),
                      {parse_operator(rhs, 1, Q)});
}

Outcome solver_cross_validation() {
  std::ostringstream os;
  int problems = 0;

  const auto none = VarIndexSet(1), one = VarIndexSet(1, {1});
  const auto f1 = decide_solve(single("d1", "1", none), 1);
  const auto f2 = decide_solve(single("x1", "1", none), 1);
  const auto f3 = decide_solve(single("d1", "1", one), 1);
  const bool fixtures = f1.status == SolveStatus::Unsolvable && f2.status == SolveStatus::Solved &&
                        f2.solution.size() == 1 && f2.solution[0].num() == parse_operator("1", 1, Q) &&
                        f2.solution[0].den() == parse_operator("x1", 1, Q) && f3.status == SolveStatus::Solved &&
                        verify_solution(single("d1", "1", one), f3.solution);
  if (!fixtures) ++problems;
  os << "fixtures " << (fixtures ? "ok" : "WRONG");

  std::mt19937_64 rng(1);
  std::mt19937_64 elim_rng(7);
  int contradictions = 0, unverified = 0, elim_mismatch = 0, elim_checked = 0, elim_capped = 0;
  int solved = 0, unsolvable = 0, undecided = 0, ansatz_solved = 0;
  constexpr int kCorpus = 60;
  for (int t = 0; t < kCorpus; ++t) {
    const int m = uniform(rng, 1, 2);
    const auto q = static_cast<std::size_t>(uniform(rng, 1, 3)), p = static_cast<std::size_t>(uniform(rng, 1, 3));
    const VarIndexSet kd = random_subset(rng, m);
    const auto full = VarIndexSet::full(m);
    OpMatrix a(m, Q, q, p);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < p; ++j)
        a.at(i, j) = rng() % 3 == 0 ? WeylOp(m, Q) : random_op(rng, m, Q, full, uniform(rng, 1, 2), 2);
    std::vector<WeylOp> rhs;
    for (std::size_t i = 0; i < q; ++i) rhs.push_back(random_op(rng, m, Q, full, uniform(rng, 1, 2), 2));
    const LinearSystem sys(FractionContext::standard(m, Q, kd), a, rhs);

    const SolveOutcome dec = decide_solve(sys, 1);
    const SolveOutcome ans = ansatz_solve(sys, {0, 1, 2, 3});
    solved += dec.status == SolveStatus::Solved;
    unsolvable += dec.status == SolveStatus::Unsolvable;
    undecided += dec.status == SolveStatus::UndecidedAtCap;
    ansatz_solved += ans.status == SolveStatus::Solved;
    const bool clash = (dec.status == SolveStatus::Solved && ans.status == SolveStatus::Unsolvable) ||
                       (dec.status == SolveStatus::Unsolvable && ans.status == SolveStatus::Solved);
    contradictions += clash;
    if (dec.status == SolveStatus::Solved && !verify_solution(sys, dec.solution)) ++unverified;
    if (ans.status == SolveStatus::Solved && !verify_solution(sys, ans.solution)) ++unverified;

    // one elimination step by hand: verdicts and solutions must carry across
    VarIndexSet outside(m);
    for (int i = 1; i <= m; ++i)
      if (!kd.contains(i)) outside = outside.with(i);
    if (outside.is_empty()) continue;
    const auto trap = trapezoid_reduce(sys);
    if (!trap) {
      if (dec.status == SolveStatus::Solved || ans.status == SolveStatus::Solved) ++elim_mismatch;
      ++elim_checked;
      continue;
    }
    int gamma = 1;
    while (!outside.contains(gamma)) ++gamma;
    try {
      const Elimination el = eliminate_gamma(*trap, gamma, elim_rng);
      const SolveOutcome sub = decide_solve(el.emitted, 1);
      bool ok = true;
      if (sub.status != SolveStatus::UndecidedAtCap && dec.status != SolveStatus::UndecidedAtCap)
        ok = ok && sub.status == dec.status;
      if (sub.status == SolveStatus::Unsolvable && ans.status == SolveStatus::Solved) ok = false;
      if (sub.status == SolveStatus::Solved) ok = ok && verify_solution(sys, el.lift(sub.solution));
      for (const SolveOutcome* known : {&dec, &ans}) {
        if (known->status == SolveStatus::Solved) ok = ok && verify_solution(el.emitted, el.project(known->solution));
      }
      if (!ok) ++elim_mismatch;
      ++elim_checked;
    } catch (const ResourceCap&) {
      ++elim_capped;
    }
  }
  problems += contradictions + unverified + elim_mismatch;
  os << "; corpus " << kCorpus << ": decide " << solved << " solved / " << unsolvable << " unsolvable / " << undecided
     << " undecided at cap, ansatz " << ansatz_solved << " solved; " << contradictions << " contradictions, "
     << unverified << " unverified solutions; elimination " << elim_checked << " checked, " << elim_capped
     << " over the unknown cap, " << elim_mismatch << " mismatches";
  return {problems == 0, os.str()};
}

ModulePresentation cyclic(int m, const std::vector<std::string>& gens) {
  std::vector<std::vector<WeylOp>> g;
  for (const auto& s : gens) g.push_back({parse_operator(s, m, Q)});
  return ModulePresentation(m, Q, 1, g);
}

Outcome hk_fixtures() {
  int bad = 0;
  auto expect = [&](const HKReport& rep, int t, long l) {
    if (rep.t != t || rep.l != l || !rep.satisfied || !rep.stabilized) ++bad;
  };
  for (int m = 1; m <= 3; ++m) {
    std::vector<std::string> gens;
    for (int i = 1; i <= m; ++i) gens.push_back("d" + std::to_string(i));
    expect(bezout_check(cyclic(m, gens), 8), 0, 1);
  }
  for (int k = 1; k <= 4; ++k) expect(bezout_check(cyclic(1, {"d1^" + std::to_string(k)}), 8), 0, k);
  const HKReport plane = bezout_check(cyclic(2, {"d1"}), 6);
  expect(plane, 1, 1);
  for (const auto& [z, v] : plane.hf)
    if (v != z + 1) ++bad;
  return {bad == 0, "8 presentations, " + std::to_string(bad) + " mismatches"};
}

Outcome weak_bezout() {
  std::mt19937_64 rng(707);
  std::vector<Monomial> pool[4];
  for (int m = 1; m <= 3; ++m) {
    for (const auto& mono : monomials_up_to(m, VarIndexSet::full(m), 4))
      if (mono.ddegree() <= 2 && mono.xdegree() <= 2) pool[m].push_back(mono);
  }
  int eligible = 0, unstable = 0, violations = 0, zero = 0;
  int by_type[4] = {0, 0, 0, 0};
  for (int inst = 0; inst < 45; ++inst) {
    const int m = uniform(rng, 1, 3), n = uniform(rng, 1, 2), s = uniform(rng, 1, 3);
    std::vector<std::vector<WeylOp>> g(s);
    for (auto& w : g) {
      for (int i = 0; i < n; ++i) {
        WeylOp e(m, Q);
        if (rng() % 4) {
          const int terms = uniform(rng, 1, 3);
          for (int k = 0; k < terms; ++k)
            e.add_term(pool[m][rng() % pool[m].size()], Scalar(Q, static_cast<long>(uniform(rng, -3, 3))));
        }
        w.push_back(e);
      }
      if (std::all_of(w.begin(), w.end(), [](const WeylOp& e) { return e.is_zero(); })) w[0] = WeylOp::d(m, Q, 1);
    }
    const ModulePresentation l(m, Q, n, g);
    HKReport rep;
    try {
      rep = bezout_check(l, 8, static_cast<std::uint64_t>(inst) + 1);
    } catch (const NotStabilized&) {
      ++unstable;
      continue;
    }
    if (!rep.stabilized) {
      ++unstable;
      continue;
    }
    ++eligible;
    if (rep.t < 0) {
      ++zero;
      continue;
    }
    ++by_type[rep.t];
    bool ok = rep.l <= mpq_class(bezout_bound(n, s, m, l.d(), rep.t));
    if (m - rep.t == 1) ok = ok && rep.l <= kolchin_sum(l);
    if (!ok) ++violations;
  }
  std::ostringstream os;
  os << eligible << " stabilized presentations (" << unstable << " not stabilized, skipped; " << zero
     << " zero modules; type counts t=0:" << by_type[0] << " t=1:" << by_type[1] << " t=2:" << by_type[2]
     << " t=3:" << by_type[3] << "), " << violations << " violations";
  return {eligible >= 30 && violations == 0, os.str()};
}

Outcome spot_values() {
  const mpz_class a = bounds::theorem_solution(1, 0, 1, 1, 1);
  const mpz_class b = bounds::lemma_vector(1, 1, 2, 1);
  const mpz_class c = bezout_bound(1, 1, 2, 1, 1);
  std::ostringstream os;
  os << "theorem_solution=" << a << " lemma_vector=" << b << " bezout_bound=" << c;
  return {a == 65536 && b == 4 && c == 256, os.str()};
}

} // namespace

int main() {
  std::cout << "tolerance: exact equality for all values; wall-clock limits per criterion" << std::endl;
  run(1, "operator product against sequential action", kLimit1, multiplication_oracle);
  run(2, "syzygy degree within the vector bound", kLimit2, syzygy_bound);
  run(3, "fraction algebra laws", kLimit3, fraction_laws);
  run(4, "left quasi-inverses", kLimit4, quasi_inverse);
  run(5, "solver cross-validation and elimination", kLimit5, solver_cross_validation);
  run(6, "Hilbert-Kolchin fixtures", kLimit6, hk_fixtures);
  run(7, "weak Bezout inequality", kLimit7, weak_bezout);
  run(8, "degree bound spot values", kLimit8, spot_values);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
