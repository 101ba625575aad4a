#pragma once

#include <random>

#include "dmod/ansatz.hpp"
#include "dmod/weyl.hpp"

namespace dmod::testing {

/// Random operator in A^(alg) with Bernstein degree <= deg, up to `terms`
/// monomials, integer coefficients in [-3, 3].
inline WeylOp random_op(std::mt19937_64& rng, int m, Field f, const VarIndexSet& alg, int deg, int terms = 3) {
  auto monos = monomials_up_to(m, alg, deg);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  std::uniform_int_distribution<long> coef(-3, 3);
  WeylOp a(m, f);
  for (int t = 0; t < terms; ++t) a.add_term(monos[pick(rng)], Scalar(f, coef(rng)));
  return a;
}

inline WeylOp random_nonzero_op(std::mt19937_64& rng, int m, Field f, const VarIndexSet& alg, int deg,
                                int terms = 3) {
  while (true) {
    WeylOp a = random_op(rng, m, f, alg, deg, terms);
    if (!a.is_zero()) return a;
  }
}

inline Polynomial random_poly(std::mt19937_64& rng, int m, Field f, int deg, int terms = 4) {
  WeylOp a = random_op(rng, m, f, VarIndexSet::empty(m), deg, terms);
  return as_polynomial(a);
}

} // namespace dmod::testing
