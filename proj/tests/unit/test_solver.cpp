#include "doctest.h"

#include "dmod/io.hpp"
#include "dmod/solver.hpp"
#include "random_ops.hpp"

using namespace dmod;

namespace {
const Field Q = Field::rationals();
WeylOp op(const char* s, int m = 1) { return parse_operator(s, m, Q); }

LinearSystem single(const char* a, const char* rhs, int m, const VarIndexSet& kd) {
  return LinearSystem(FractionContext::standard(m, Q, kd), OpMatrix({{op(a, m)}}), {op(rhs, m)});
}
} // namespace

TEST_CASE("bounds") {
  CHECK(bounds::theorem_solution(1, 0, 1, 1, 1) == 65536);
  CHECK(bounds::lemma_vector(1, 1, 2, 1) == 4);
  CHECK(bounds::elimination(1, 1, 1) == 16);
  CHECK(bounds::final_ansatz(1, 0, 1, 10) == 30);
}

TEST_CASE("normalize_family") {
  std::mt19937_64 rng(5);
  VarIndexSet none(2);
  auto [rec, out] = normalize_family({op("x1*d1 + 1", 2)}, 1, none, rng);
  CHECK(rec.attempts == 1);
  CHECK(rec.omega == ScalarMatrix::identity(Q, 2));

  auto [rec2, out2] = normalize_family({op("d2", 2)}, 1, none, rng);
  CHECK(rec2.attempts > 1);
  CHECK(is_normalized(out2[0], 1, none));
  auto lc = gamma_decompose(out2[0], 1).front();
  CHECK(lc.first == 1);
  CHECK(lc.second.derivation_support().is_empty());

  auto t = omega_transform(op("d2", 2), ScalarMatrix(Q, {{1, 0}, {1, 1}}), none);
  CHECK(t == op("d1 + d2", 2));
  CHECK(is_normalized(t, 1, none));

  auto [rec3, out3] = normalize_family({op("x1", 2)}, 1, none, rng);
  CHECK(rec3.attempts == 1);
}

TEST_CASE("gamma_div_rem") {
  auto ctx = FractionContext::standard(1, Q, VarIndexSet(1));
  auto d = op("d1");
  auto r1 = gamma_div_rem(OreFraction::from_op(ctx, op("d1^2")), d, 1);
  CHECK(frac_eq(r1.phi, OreFraction::from_op(ctx, d)));
  CHECK(r1.psi.is_zero());

  auto r2 = gamma_div_rem(OreFraction::from_op(ctx, op("x1*d1")), d, 1);
  CHECK(frac_eq(r2.phi, OreFraction::from_op(ctx, op("x1"))));
  CHECK(frac_eq(r2.psi, OreFraction::from_op(ctx, op("-1"))));

  auto v = OreFraction(ctx, op("x1"), op("x1 + 1"));
  auto r3 = gamma_div_rem(v, d, 1);
  CHECK(r3.phi.is_zero());
  CHECK(frac_eq(r3.psi, v));

  auto ctx2 = FractionContext::standard(2, Q, VarIndexSet(2));
  CHECK_THROWS_AS(gamma_div_rem(OreFraction::from_op(ctx2, op("d1", 2)), op("d2*d1", 2), 1), NotNormalized);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 15; ++t) {
    auto num = testing::random_op(rng, 1, Q, VarIndexSet::full(1), 3, 3);
    auto den = testing::random_nonzero_op(rng, 1, Q, VarIndexSet(1), 1, 2);
    auto h = testing::random_nonzero_op(rng, 1, Q, VarIndexSet::full(1), 2, 2);
    OreFraction w(ctx, num, den);
    auto dr = gamma_div_rem(w, h, 1);
    CHECK(d_degree(dr.psi.num(), 1) < d_degree(h, 1));
    CHECK(frac_eq(frac_add(frac_mul(OreFraction::from_op(ctx, h), dr.phi), dr.psi), w));
  }
}

TEST_CASE("decide_solve fixtures") {
  VarIndexSet none(1), all(1, {1});
  auto s1 = decide_solve(single("d1", "1", 1, none), 1);
  CHECK(s1.status == SolveStatus::Unsolvable);

  auto s2 = decide_solve(single("x1", "1", 1, none), 1);
  REQUIRE(s2.status == SolveStatus::Solved);
  CHECK(frac_eq(s2.solution[0], OreFraction(s2.solution[0].ctx(), op("1"), op("x1"))));
  CHECK(s2.solution[0].str() == "1 * (x1)^-1");

  auto s3 = decide_solve(single("d1", "1", 1, all), 1);
  REQUIRE(s3.status == SolveStatus::Solved);
  CHECK(frac_eq(s3.solution[0], OreFraction(s3.solution[0].ctx(), op("1"), op("d1"))));

  auto s4 = decide_solve(single("1", "x1*d1 + 3", 1, none), 1);
  REQUIRE(s4.status == SolveStatus::Solved);
  CHECK(s4.solution[0].num() == op("x1*d1 + 3"));
}

TEST_CASE("eliminate_gamma fixtures") {
  std::mt19937_64 rng(1);
  auto t = trapezoid_reduce(single("d1", "1", 1, VarIndexSet(1)));
  REQUIRE(t);
  auto el = eliminate_gamma(*t, 1, rng);
  CHECK(el.emitted.ctx.ka.is_empty());
  CHECK(ansatz_solve(el.emitted, {0, 1, 2}).status != SolveStatus::Solved);
  CHECK(decide_solve(el.emitted, 1).status == SolveStatus::Unsolvable);

  auto t2 = trapezoid_reduce(single("x1", "1", 1, VarIndexSet(1)));
  auto el2 = eliminate_gamma(*t2, 1, rng);
  auto sub = decide_solve(el2.emitted, 1);
  REQUIRE(sub.status == SolveStatus::Solved);
  auto lifted = el2.lift(sub.solution);
  CHECK(verify_solution(single("x1", "1", 1, VarIndexSet(1)), lifted));
}

TEST_CASE("base_solve_skew") {
  auto ctx = FractionContext(1, Q, VarIndexSet(1), VarIndexSet(1));
  LinearSystem s(ctx, OpMatrix({{op("1"), op("1")}, {op("0"), op("x1")}}), {op("0"), op("1")});
  auto out = base_solve_skew(s);
  REQUIRE(out.status == SolveStatus::Solved);
  CHECK(frac_eq(out.solution[1], OreFraction(ctx, op("1"), op("x1"))));
  CHECK(frac_eq(out.solution[0], OreFraction(ctx, op("-1"), op("x1"))));
  LinearSystem z(ctx, OpMatrix({{op("0")}}), {op("1")});
  CHECK(base_solve_skew(z).status == SolveStatus::Unsolvable);
}

TEST_CASE("ansatz_solve") {
  auto s = single("x1", "1", 1, VarIndexSet(1));
  auto out = ansatz_solve(s, {0, 1});
  REQUIRE(out.status == SolveStatus::Solved);
  CHECK(out.solution[0].num() == op("1"));
  CHECK(out.solution[0].den() == op("x1"));

  auto same = ansatz_solve(single("x1*d1 + x1", "x1*d1 + x1", 1, VarIndexSet(1)), {0, 1});
  REQUIRE(same.status == SolveStatus::Solved);
  CHECK(frac_eq(same.solution[0], OreFraction::from_op(same.solution[0].ctx(), op("1"))));

  CHECK(ansatz_solve(single("d1", "1", 1, VarIndexSet(1)), {0, 1, 2, 3, 4, 5}).status == SolveStatus::UndecidedAtCap);
}

TEST_CASE("verify_solution") {
  auto s = single("x1", "1", 1, VarIndexSet(1));
  auto ctx = s.ctx;
  CHECK(verify_solution(s, {OreFraction(ctx, op("1"), op("x1"))}));
  CHECK_FALSE(verify_solution(s, {OreFraction(ctx, op("2"), op("x1"))}));
  CHECK_THROWS_AS(verify_solution(s, {op("1")}, op("0")), ZeroDenominator);
}

TEST_CASE("two-variable elimination round trip") {
  VarIndexSet none(2);
  // d1 V = x2 d2: no solution; x1 V = d1 + d2: V = x1^{-1}(d1 + d2)
  auto bad = LinearSystem(FractionContext::standard(2, Q, none), OpMatrix({{op("d1", 2)}}), {op("x2*d2", 2)});
  CHECK(decide_solve(bad, 1).status == SolveStatus::Unsolvable);
  auto good = LinearSystem(FractionContext::standard(2, Q, none), OpMatrix({{op("x1", 2)}}), {op("d1 + d2", 2)});
  auto out = decide_solve(good, 1);
  REQUIRE(out.status == SolveStatus::Solved);
  auto ans = ansatz_solve(good, {0, 1, 2, 3});
  CHECK(ans.status == SolveStatus::Solved);
}
