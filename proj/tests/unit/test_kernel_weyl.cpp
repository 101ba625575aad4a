#include "doctest.h"

#include <random>

#include "dmod/io.hpp"
#include "dmod/linalg.hpp"
#include "dmod/weyl.hpp"

using namespace dmod;

namespace {
const Field Q = Field::rationals();
WeylOp op(const char* s, int m = 1) { return parse_operator(s, m, Q); }
} // namespace

TEST_CASE("scalar arithmetic") {
  CHECK(Scalar::rational(1, 2) + Scalar::rational(1, 3) == Scalar::rational(5, 6));
  CHECK_THROWS_AS(Scalar(Q).inv(), DivisionByZero);
  Field f5 = Field::prime(5);
  CHECK((Scalar(f5, 3) * Scalar(f5, 4)).residue() == 2);
  CHECK_THROWS_AS((void)(Scalar(f5, 1) == Scalar(Q, 1)), FieldMismatch);
  CHECK(Scalar::rational(4, -6).str() == "-2/3");
}

TEST_CASE("nullspace and solve_linear") {
  auto k = nullspace(ScalarMatrix(Q, {{1, 1}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] + k[0][1] == Scalar(Q));
  CHECK(nullspace(ScalarMatrix::identity(Q, 2)).empty());
  auto k2 = nullspace(ScalarMatrix(Q, {{1, 2}, {2, 4}}));
  REQUIRE(k2.size() == 1);
  CHECK(k2[0][0] == Scalar(Q, -2) * k2[0][1]);

  auto v = solve_linear(ScalarMatrix(Q, {{2}}), {Scalar(Q, 1)});
  REQUIRE(v);
  CHECK((*v)[0] == Scalar::rational(1, 2));
  CHECK_FALSE(solve_linear(ScalarMatrix(Q, {{1}, {1}}), {Scalar(Q, 0), Scalar(Q, 1)}));
  auto z = solve_linear(ScalarMatrix(Q, 2, 2), {Scalar(Q), Scalar(Q)});
  REQUIRE(z);
  CHECK((*z)[0].is_zero());
}

TEST_CASE("rank over random matrices: kernel plus rank equals columns") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> v(-2, 2);
  for (int t = 0; t < 40; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    ScalarMatrix m(Q, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Scalar(Q, v(rng));
    auto ker = nullspace(m);
    CHECK(ker.size() + rank(m) == c);
    for (const auto& k : ker) {
      for (const auto& e : m * k) CHECK(e.is_zero());
    }
  }
}

TEST_CASE("rank_specialized") {
  auto x1 = Polynomial::variable(2, Q, 1), x2 = Polynomial::variable(2, Q, 2);
  CHECK(rank_specialized({{x1, x1 * x1}}, 3, 1) == 1);
  CHECK(rank_specialized({{x1, x2}, {x2, x1}}, 3, 1) == 2);
  CHECK(rank_specialized({{Polynomial(2, Q), Polynomial(2, Q)}}, 3, 1) == 0);
  CHECK_THROWS_AS(rank_specialized({{Polynomial(2, Field::prime(7))}}, 1, 1), CharPUnsupported);
}

TEST_CASE("normal ordering") {
  CHECK(to_string(op("d1*x1")) == "x1*d1 + 1");
  CHECK(op("d2*x1", 2) == op("x1*d2", 2));
  CHECK(to_string(op("d1*x1^2")) == "x1^2*d1 + 2*x1");
  CHECK(to_string(op("x1^2 - 1/2")) == "x1^2 - 1/2");
  CHECK(op("(x1+d1)^2") == op("x1^2 + 2*x1*d1 + d1^2 + 1"));
  CHECK(to_string(op("-x1 + 3")) == "-x1 + 3");
  CHECK(to_string(op("x1 - x1")) == "0");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(op("x2"), IndexOutOfRange);
  CHECK_THROWS_AS(op("x1 +"), SyntaxError);
  try {
    op("x1 * )");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(op("1/0"), SyntaxError);
}

TEST_CASE("linear_combine") {
  auto a = op("x1*d1 + x1");
  CHECK(linear_combine({Scalar(Q, 1), Scalar(Q, -1)}, {a, a}).is_zero());
  CHECK(linear_combine({Scalar(Q, 2), Scalar(Q, 3)}, {op("x1"), op("x1")}) == op("5*x1"));
  CHECK(linear_combine({Scalar(Q, 1), Scalar(Q, 1)}, {op("x1*d1"), op("1")}) == op("x1*d1 + 1"));
}

TEST_CASE("filtration degrees") {
  CHECK(bernstein_degree(op("x1^2*d1*d2", 2)) == 4);
  auto a = op("x2*d1^2*d2^3", 2);
  VarIndexSet k(2, {1});
  CHECK(filtration_degree(a, DegreeKind::OrdK, k) == 3);
  CHECK(filtration_degree(a, DegreeKind::DegK, k) == 3);
  CHECK(filtration_degree(WeylOp(2, Q), DegreeKind::OrdD) == -1);
  CHECK_THROWS_AS(filtration_degree(a, DegreeKind::OrdK), MissingK);
}

TEST_CASE("gamma_decompose") {
  auto dec = gamma_decompose(op("d1"), 1);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].first == 1);
  CHECK(dec[0].second == op("1"));

  auto h = op("x1*d1^2 + d1");
  dec = gamma_decompose(h, 1);
  REQUIRE(dec.size() == 2);
  CHECK(dec[0].first == 2);
  CHECK(dec[0].second == op("x1"));
  CHECK(dec[1].first == 1);
  CHECK(dec[1].second == op("-1"));

  auto g = op("x1*x2*d2 + x2", 2);
  dec = gamma_decompose(g, 1);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].first == 0);
  CHECK(dec[0].second == g);
}

TEST_CASE("omega_transform") {
  ScalarMatrix omega(Q, {{1, 0}, {1, 1}});
  VarIndexSet none(2);
  CHECK(omega_transform(op("d2", 2), omega, none) == op("d1 + d2", 2));
  CHECK(omega_transform(op("x1", 2), omega, none) == op("x1 - x2", 2));
  CHECK(omega_transform(op("x2", 2), omega, none) == op("x2", 2));
  CHECK(omega_transform(op("d1*x1 - x1*d1", 2), omega, none) == op("1", 2));
  auto h = op("x1*d2^2 + x2*d1 - 3", 2);
  CHECK(omega_transform(h, ScalarMatrix::identity(Q, 2), none) == h);
  CHECK_THROWS_AS(omega_transform(h, ScalarMatrix(Q, {{1, 1}, {1, 1}}), none), SingularOmega);
  // with K = {2}, only index 1 is transformed
  CHECK(omega_transform(op("x1*d1*d2", 2), ScalarMatrix(Q, {{2}}), VarIndexSet(2, {2})) == op("x1*d1*d2", 2));
}

TEST_CASE("polynomial action") {
  auto one = Polynomial::constant(1, Scalar(Q, 1));
  auto x = Polynomial::variable(1, Q, 1);
  CHECK(apply_to_polynomial(op("d1*x1"), one) == one);
  CHECK(apply_to_polynomial(op("d1^2"), x * x * x) == x * Scalar(Q, 6));
  CHECK(apply_to_polynomial(op("x1*d1"), x * x) == x * x * Scalar(Q, 2));
  CHECK_THROWS_AS(apply_to_polynomial(parse_operator("d1", 1, Field::prime(5)), Polynomial::constant(1, Scalar(Field::prime(5), 1))),
                  CharPUnsupported);
}

TEST_CASE("adjoint reverses products") {
  auto a = op("x1*d1^2 + d1", 1), b = op("x1^2 + d1");
  CHECK(adjoint(a * b) == adjoint(b) * adjoint(a));
  CHECK(adjoint(op("d1")) == op("-d1"));
}

TEST_CASE("mul_mod reductions") {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {kMersenne61, (std::uint64_t{1} << 62) - 57, std::uint64_t{1000003}}) {
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t a = rng() % p, b = rng() % p;
      CHECK(mul_mod(a, b, p) == static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p));
    }
    CHECK(mul_mod(p - 1, p - 1, p) == 1);
  }
}
