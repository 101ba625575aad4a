#pragma once

// Hilbert-Kolchin analysis of left submodules L of (F(X)[D])^n generated by
// tuples of Weyl operators with polynomial coefficients.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dmod/weyl.hpp"

namespace dmod {

/// Generators w_j = (w_{1,j}, ..., w_{n,j}), j = 1..s, stored as generators[j][i].
class ModulePresentation {
public:
  ModulePresentation(int m, Field f, int n, std::vector<std::vector<WeylOp>> generators);

  int m() const { return m_; }
  Field field() const { return f_; }
  int n() const { return n_; }
  int s() const { return static_cast<int>(gens_.size()); }
  const std::vector<std::vector<WeylOp>>& generators() const { return gens_; }
  const WeylOp& entry(int i, int j) const { return gens_[j][i]; }
  /// Max order in D over all entries.
  int d() const;
  /// Order of the generator tuple w_j.
  int order(int j) const;

private:
  int m_;
  Field f_;
  int n_;
  std::vector<std::vector<WeylOp>> gens_;
};

struct HilbertValues {
  std::vector<long> hf;                 ///< HF(z), z = 0..zmax
  std::vector<std::vector<long>> levels; ///< estimate at each extension level, k = 0, 1, ...
  bool stabilized = false;
};

/// HF(z) for z = 0..zmax. The dimension of L intersected with the order <= z
/// part is read off the echelon form of all D^b w_j of order <= zmax + k; the
/// extension level k grows until the values repeat for `k_stab` consecutive
/// levels or k reaches zmax + 4 d s. Ranks over F(X) come from 3 random
/// specializations modulo 2^61 - 1, so the result is correct with high
/// probability rather than certainly.
HilbertValues hilbert_values(const ModulePresentation& l, int zmax, int k_stab = 2, std::uint64_t seed = 1);
long hilbert_function(const ModulePresentation& l, int z, int k_stab = 2, std::uint64_t seed = 1);

struct HKFit {
  int t = -1;                  ///< -1 marks the zero module
  mpq_class l;                 ///< t! times the leading coefficient
  std::vector<mpq_class> poly; ///< coefficients in z, ascending; empty for the zero module
  int tail_start = 0;          ///< first z where the polynomial matches
};

/// Lowest-degree polynomial that matches a tail of at least t + 3 points.
/// Throws NotStabilized when no tail qualifies.
HKFit hk_fit(const std::vector<long>& hf);
std::string poly_to_string(const std::vector<mpq_class>& poly);

/// n (4 m^2 d min(n, s))^(4^(m - t - 1) 2 (m - t)), and n when t = m.
mpz_class bezout_bound(int n, int s, int m, int d, int t);
/// Sum over coordinates i of max_j ord(w_{i,j}).
long kolchin_sum(const ModulePresentation& l);

struct PrincipalElement {
  WeylOp b;                    ///< in A^(K)
  std::vector<WeylOp> coeffs;  ///< c_j with sum_j c_j w_{i,j} = b [i == i0]
};

/// Solves sum_j C_j w_{i,j} = [i == i0] over the fractions with denominators
/// in A^(K) and clears denominators. Membership of (0, .., b, .., 0) in L is
/// checked before returning. nullopt when no such C exists. Throws
/// ResourceCap when the solver gives up.
std::optional<PrincipalElement> principal_element(const ModulePresentation& l, int i0, const VarIndexSet& k,
                                                  std::uint64_t seed = 1);
/// {1..t+1}, {2..t+2}, ..., {m-t..m}.
std::vector<VarIndexSet> default_k_sequence(int m, int t);

struct HKReport {
  std::vector<std::pair<int, long>> hf;
  int t = -1;
  mpq_class l;
  std::vector<mpq_class> poly;
  std::optional<mpz_class> bezout;      ///< absent for the zero module
  std::optional<long> kolchin;          ///< present when m - t = 1
  bool satisfied = true;
  bool stabilized = false;
  std::string note;
};

/// HF for z = 0..zmax, fit, and the bound checks. Throws NotStabilized when
/// no polynomial tail is found.
HKReport bezout_check(const ModulePresentation& l, int zmax, std::uint64_t seed = 1);

} // namespace dmod
