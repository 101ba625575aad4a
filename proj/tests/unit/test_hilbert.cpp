#include "doctest.h"

#include "dmod/hilbert.hpp"
#include "dmod/io.hpp"
#include "random_ops.hpp"

using namespace dmod;

namespace {
const Field Q = Field::rationals();

ModulePresentation cyclic(int m, std::initializer_list<const char*> gens) {
  std::vector<std::vector<WeylOp>> g;
  for (const char* s : gens) g.push_back({parse_operator(s, m, Q)});
  return ModulePresentation(m, Q, 1, g);
}

long binom(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
} // namespace

TEST_CASE("hilbert function closed forms") {
  auto l1 = cyclic(1, {"d1"});
  for (int z = 0; z <= 5; ++z) CHECK(hilbert_function(l1, z) == 1);

  auto hv = hilbert_values(cyclic(2, {"d1"}), 6);
  CHECK(hv.stabilized);
  for (int z = 0; z <= 6; ++z) CHECK(hv.hf[z] == z + 1);

  auto sq = hilbert_values(cyclic(1, {"d1^2"}), 5).hf;
  CHECK(sq[0] == 1);
  for (int z = 1; z <= 5; ++z) CHECK(sq[z] == 2);

  // the order-0 generator x1 + 1 is invertible over F(X)
  auto unit = hilbert_values(cyclic(2, {"x1 + 1"}), 3).hf;
  for (long v : unit) CHECK(v == 0);
}

TEST_CASE("hk_fit") {
  auto a = hk_fit({1, 1, 1, 1});
  CHECK(a.t == 0);
  CHECK(a.l == 1);
  auto b = hk_fit({1, 2, 3, 4, 5});
  CHECK(b.t == 1);
  CHECK(b.l == 1);
  CHECK(poly_to_string(b.poly) == "z + 1");
  auto c = hk_fit({1, 3, 6, 10, 15});
  CHECK(c.t == 2);
  CHECK(c.l == 1);
  CHECK(poly_to_string(c.poly) == "1/2*z^2 + 3/2*z + 1");
  auto d = hk_fit({1, 2, 2, 2, 2});
  CHECK(d.t == 0);
  CHECK(d.l == 2);
  CHECK(d.tail_start == 1);
  auto zero = hk_fit({0, 0, 0});
  CHECK(zero.t == -1);
  CHECK(zero.poly.empty());
  CHECK_THROWS_AS(hk_fit({1, 2, 4, 8}), NotStabilized);
  CHECK_THROWS_AS(hk_fit({1, 2}), NotStabilized);
}

TEST_CASE("hk fixtures") {
  for (int m = 1; m <= 3; ++m) {
    std::vector<std::vector<WeylOp>> g;
    for (int i = 1; i <= m; ++i) g.push_back({WeylOp::d(m, Q, i)});
    auto rep = bezout_check(ModulePresentation(m, Q, 1, g), 6);
    CHECK(rep.t == 0);
    CHECK(rep.l == 1);
    CHECK(rep.satisfied);
  }
  for (int k = 1; k <= 4; ++k) {
    std::string s = "d1^" + std::to_string(k);
    auto rep = bezout_check(cyclic(1, {s.c_str()}), 8);
    CHECK(rep.t == 0);
    CHECK(rep.l == k);
    REQUIRE(rep.kolchin.has_value());
    CHECK(*rep.kolchin == k);
    CHECK(rep.satisfied);
  }
  auto rep = bezout_check(cyclic(2, {"d1"}), 6);
  CHECK(rep.t == 1);
  CHECK(rep.l == 1);
  CHECK(*rep.bezout == 256);
  CHECK(*rep.kolchin == 1);
  CHECK(rep.satisfied);
  for (const auto& [z, v] : rep.hf) CHECK(v == z + 1);
}

TEST_CASE("bezout_bound") {
  CHECK(bezout_bound(1, 1, 2, 1, 1) == 256);
  CHECK(bezout_bound(3, 1, 2, 1, 2) == 3);
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 64, 16);
  CHECK(bezout_bound(2, 3, 2, 2, 0) == 2 * big);
  CHECK_THROWS_AS(bezout_bound(1, 1, 2, 1, 3), InvalidArgument);
}

TEST_CASE("principal_element") {
  auto one = principal_element(cyclic(1, {"1"}), 1, VarIndexSet(1));
  REQUIRE(one.has_value());
  CHECK(bernstein_degree(one->b) == 0);

  auto pe = principal_element(cyclic(2, {"d1", "d2"}), 1, VarIndexSet(2, {1}));
  REQUIRE(pe.has_value());
  CHECK(pe->b.in_subalgebra(VarIndexSet(2, {1})));
  CHECK(!pe->b.is_zero());

  std::vector<std::vector<WeylOp>> g{{parse_operator("d1", 2, Q), WeylOp(2, Q)},
                                     {WeylOp(2, Q), parse_operator("x1", 2, Q)}};
  ModulePresentation two(2, Q, 2, g);
  auto pe2 = principal_element(two, 1, VarIndexSet(2, {1}));
  REQUIRE(pe2.has_value());
  CHECK(pe2->b.in_subalgebra(VarIndexSet(2, {1})));
  CHECK(!pe2->b.is_zero());

  // d1 has no left inverse with a polynomial denominator
  auto none = principal_element(cyclic(2, {"d1"}), 1, VarIndexSet(2));
  CHECK(!none.has_value());

  auto ks = default_k_sequence(3, 1);
  REQUIRE(ks.size() == 2);
  CHECK(ks[0] == VarIndexSet(3, {1, 2}));
  CHECK(ks[1] == VarIndexSet(3, {2, 3}));
}

TEST_CASE("hilbert properties on random modules") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 2), n = 1 + static_cast<int>(rng() % 2);
    const int s = 1 + static_cast<int>(rng() % 2);
    std::vector<std::vector<WeylOp>> g(s);
    for (auto& w : g) {
      for (int i = 0; i < n; ++i) w.push_back(testing::random_op(rng, m, Q, VarIndexSet::full(m), 2, 2));
      if (std::all_of(w.begin(), w.end(), [](const WeylOp& e) { return e.is_zero(); })) w[0] = WeylOp::d(m, Q, 1);
    }
    ModulePresentation l(m, Q, n, g);
    auto hv = hilbert_values(l, 5);
    for (std::size_t k = 0; k < hv.levels.size(); ++k) {
      for (int z = 0; z <= 5; ++z) {
        CHECK(hv.levels[k][z] <= n * binom(z + m, m));
        CHECK(hv.levels[k][z] >= 0);
        if (k > 0) CHECK(hv.levels[k][z] <= hv.levels[k - 1][z]);
      }
    }
  }
}

TEST_CASE("hilbert function of constant-coefficient ideals") {
  // reference values: affine Hilbert functions of the commutative ideals,
  // counted from graded reverse lexicographic Groebner bases (sympy)
  struct Case {
    int m;
    std::initializer_list<const char*> gens;
    std::vector<long> hf;
  };
  const Case cases[] = {
      {2, {"d1^2 - d2", "d1*d2"}, {1, 3, 3, 3, 3, 3, 3, 3, 3}},
      {2, {"d1^2 + d2^2", "d1*d2"}, {1, 3, 4, 4, 4, 4, 4, 4, 4}},
      {3, {"d1*d2", "d2*d3", "d1*d3"}, {1, 4, 7, 10, 13, 16, 19, 22, 25}},
      {3, {"d1^2 - d2*d3", "d2^2"}, {1, 4, 8, 12, 16, 20, 24, 28, 32}},
      {2, {"d1^3 + d1*d2", "d2^2 - d1"}, {1, 3, 5, 6, 6, 6, 6, 6, 6}},
      {3, {"d1^2 + d2", "d3^2"}, {1, 4, 8, 12, 16, 20, 24, 28, 32}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.m);
    auto hv = hilbert_values(cyclic(c.m, c.gens), 8);
    CHECK(hv.stabilized);
    CHECK(hv.hf == c.hf);
  }
}
