#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dmod/matops.hpp"

namespace dmod {

enum class SolveStatus { Solved, Unsolvable, UndecidedAtCap };
std::string to_string(SolveStatus s);

/// One line of the degree ledger: which stage, what quantity, its value.
struct Certificate {
  std::string stage;
  std::string name;
  std::string value;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::UndecidedAtCap;
  std::vector<OreFraction> solution; ///< in the original column order
  std::vector<Certificate> certificates;
  std::string note;
};

struct NormalizationRecord {
  ScalarMatrix omega;  ///< acts on the derivations outside `fixed`, ascending
  VarIndexSet fixed;   ///< indices left untouched
  int gamma = 0;
  int attempts = 0;
};

/// True when deg_{D_gamma}(h) equals the order in the derivations outside
/// `fixed`, i.e. the leading D_gamma coefficient avoids those derivations.
bool is_normalized(const WeylOp& h, int gamma, const VarIndexSet& fixed);

/// Tries Omega = identity, then random integer matrices with entries in
/// [-8, 8], the range doubling on each retry, until every transformed element
/// is normalized. Throws RetryLimitExceeded after `max_attempts`.
std::pair<NormalizationRecord, std::vector<WeylOp>> normalize_family(const std::vector<WeylOp>& h, int gamma,
                                                                     const VarIndexSet& fixed, std::mt19937_64& rng,
                                                                     int max_attempts = 32);
std::pair<NormalizationRecord, std::vector<WeylOp>> normalize_family(const std::vector<WeylOp>& h, int gamma,
                                                                     const VarIndexSet& fixed, std::uint64_t seed);

struct DivRem {
  OreFraction phi;
  OreFraction psi;
};

/// v = h phi + psi with deg_{D_gamma}(psi) < deg_{D_gamma}(h). The context of
/// v must contain gamma among the numerator derivations and not among the
/// denominator ones. Throws NotNormalized if the leading D_gamma coefficient
/// of h is not an admissible denominator.
DivRem gamma_div_rem(const OreFraction& v, const WeylOp& h, int gamma);

/// One elimination step: the trapezoid system over (Ka, Kd) becomes an
/// equivalent system over (Ka minus gamma, Kd) whose unknowns are the right
/// D_gamma-coefficients psi[k][s] of the transformed unknowns.
struct Elimination {
  Trapezoid input;
  int gamma = 0;
  NormalizationRecord norm;
  OpMatrix gbar;                          ///< transformed trapezoid matrix
  std::vector<WeylOp> fbar;
  std::vector<std::vector<WeylOp>> hbar;  ///< per free column: h_1..h_r, h
  std::vector<int> slots;                 ///< number of D_gamma powers per column
  std::vector<std::size_t> offset;        ///< first emitted unknown per column
  LinearSystem emitted;

  /// Solution of the emitted system -> solution of the original system
  /// (original column order).
  std::vector<OreFraction> lift(const std::vector<OreFraction>& psi) const;
  /// Solution of the original system -> solution of the emitted system, by
  /// transforming and dividing the free unknowns by h.
  std::vector<OreFraction> project(const std::vector<OreFraction>& v) const;
};

/// Requires gamma in Ka minus Kd. Throws ResourceCap when the emitted system
/// would exceed limits().max_unknowns.
Elimination eliminate_gamma(const Trapezoid& sys, int gamma, std::mt19937_64& rng);

/// Ka == Kd: elimination over the skew field of fractions.
SolveOutcome base_solve_skew(const LinearSystem& sys);

/// Trapezoid reduction and elimination of Ka minus Kd in ascending order,
/// then the skew-field base case. Every SOLVED outcome is verified.
SolveOutcome decide_solve(const LinearSystem& sys, std::uint64_t seed);

/// Shared-denominator ansatz v_i = c_i b^{-1} with deg c_i, deg b <= D for D
/// in the schedule.
SolveOutcome ansatz_solve(const LinearSystem& sys, const std::vector<int>& schedule);
std::vector<int> default_schedule();

/// Exact check after clearing denominators. Throws ZeroDenominator when b is 0.
bool verify_solution(const LinearSystem& sys, const std::vector<OreFraction>& sol);
bool verify_solution(const LinearSystem& sys, const std::vector<WeylOp>& c, const WeylOp& b);

namespace bounds {
/// 2 (m + k) (p - 1) d
mpz_class lemma_vector(int m, int k, int p, int d);
/// (16 m^4 d^2 min(p, q)^2)^(4^(m - k))
mpz_class theorem_solution(int m, int k, int d, int p, int q);
/// 16 m^2 r^2 d
mpz_class elimination(int m, int r, int d);
/// (2m)^(4^(m - k)) (d r)^(3^(m - k)); reported only
mpz_class n4(int m, int k, int d, int r);
/// (2 (m + k) p + 1) N5
mpz_class final_ansatz(int m, int k, int p, const mpz_class& n5);
} // namespace bounds

} // namespace dmod
