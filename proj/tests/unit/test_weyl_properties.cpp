#include "doctest.h"

#include "random_ops.hpp"

using namespace dmod;
using dmod::testing::random_nonzero_op;
using dmod::testing::random_op;
using dmod::testing::random_poly;

namespace {
const Field Q = Field::rationals();
}

TEST_CASE("product is associative and distributive") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    int m = 1 + static_cast<int>(rng() % 3);
    auto full = VarIndexSet::full(m);
    auto a = random_op(rng, m, Q, full, 3), b = random_op(rng, m, Q, full, 3), c = random_op(rng, m, Q, full, 3);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) * c == a * c + b * c);
  }
}

TEST_CASE("degrees are additive on products") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 60; ++t) {
    int m = 1 + static_cast<int>(rng() % 3);
    auto full = VarIndexSet::full(m);
    auto a = random_nonzero_op(rng, m, Q, full, 3), b = random_nonzero_op(rng, m, Q, full, 3);
    CHECK(bernstein_degree(a * b) == bernstein_degree(a) + bernstein_degree(b));
    VarIndexSet k(m, {1});
    CHECK(filtration_degree(a * b, DegreeKind::OrdK, k) ==
          filtration_degree(a, DegreeKind::OrdK, k) + filtration_degree(b, DegreeKind::OrdK, k));
  }
}

TEST_CASE("action is a representation") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 40; ++t) {
    int m = 1 + static_cast<int>(rng() % 3);
    auto full = VarIndexSet::full(m);
    auto a = random_op(rng, m, Q, full, 3), b = random_op(rng, m, Q, full, 3);
    auto f = random_poly(rng, m, Q, 4);
    CHECK(apply_to_polynomial(a * b, f) == apply_to_polynomial(a, apply_to_polynomial(b, f)));
  }
}

TEST_CASE("gamma_decompose and left_decompose reassemble") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 60; ++t) {
    int m = 1 + static_cast<int>(rng() % 3);
    auto h = random_op(rng, m, Q, VarIndexSet::full(m), 4, 5);
    int gamma = 1 + static_cast<int>(rng() % m);
    WeylOp sum(m, Q);
    for (const auto& [s, hs] : gamma_decompose(h, gamma)) {
      CHECK(d_degree(hs, gamma) <= 0);
      Exponents e{};
      e[gamma - 1] = static_cast<std::uint16_t>(s);
      sum += d_power(m, Q, e) * hs;
    }
    CHECK(sum == h);

    VarIndexSet out(m);
    for (int i = 1; i <= m; ++i) {
      if (rng() % 2) out = out.with(i);
    }
    WeylOp sum2(m, Q);
    for (const auto& [s, hs] : left_decompose(h, out)) {
      CHECK(hs.derivation_support().subset_of(out.complement()));
      sum2 += d_power(m, Q, s) * hs;
    }
    CHECK(sum2 == h);
  }
}

TEST_CASE("omega_transform is a degree-preserving homomorphism") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<long> e(-3, 3);
  for (int t = 0; t < 30; ++t) {
    int m = 2 + static_cast<int>(rng() % 2);
    VarIndexSet k = rng() % 2 ? VarIndexSet(m, {m}) : VarIndexSet(m);
    std::size_t n = static_cast<std::size_t>(m - k.size());
    ScalarMatrix omega(Q, n, n);
    do {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) omega.at(i, j) = Scalar(Q, e(rng));
    } while (rank(omega) < n);
    auto full = VarIndexSet::full(m);
    auto a = random_op(rng, m, Q, full, 2), b = random_op(rng, m, Q, full, 2);
    auto ta = omega_transform(a, omega, k), tb = omega_transform(b, omega, k);
    CHECK(omega_transform(a * b, omega, k) == ta * tb);
    for (auto kind : {DegreeKind::Bernstein, DegreeKind::OrdD, DegreeKind::OrdK, DegreeKind::DegK}) {
      CHECK(filtration_degree(ta, kind, k) == filtration_degree(a, kind, k));
    }
  }
}
