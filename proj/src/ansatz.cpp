#include "dmod/ansatz.hpp"

#include "dmod/echelon.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dmod {

Limits& limits() {
  static Limits l;
  return l;
}

std::vector<Monomial> monomials_up_to(int m, const VarIndexSet& alg, int deg) {
  std::vector<int> slots; // 0..m-1 are X's, m+i is D_{i+1}
  for (int i = 0; i < m; ++i) slots.push_back(i);
  for (int k : alg.members()) slots.push_back(m + k - 1);
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t s, int left) -> void {
    if (s == slots.size()) {
      out.push_back(cur);
      return;
    }
    int v = slots[s];
    auto& e = v < m ? cur.x[v] : cur.d[v - m];
    for (int k = 0; k <= left; ++k) {
      e = static_cast<std::uint16_t>(k);
      self(self, s + 1, left - k);
    }
    e = 0;
  };
  if (deg >= 0) rec(rec, 0, deg);
  std::sort(out.begin(), out.end());
  return out;
}

AnsatzSystem::AnsatzSystem(int m, Field f, Side side, const std::vector<std::vector<WeylOp>>& coeffs,
                           const std::vector<VarIndexSet>& algs, int degree)
    : m_(m), f_(f) {
  const std::size_t nunk = algs.size();
  const std::size_t neq =
      side == Side::Right ? coeffs.size() : (coeffs.empty() ? 0 : coeffs.front().size());
  auto coeff = [&](std::size_t eq, std::size_t j) -> const WeylOp& {
    return side == Side::Right ? coeffs[eq][j] : coeffs[j][eq];
  };
  begin_.push_back(0);
  std::vector<std::vector<Monomial>> monos(nunk);
  std::size_t total = 0;
  for (std::size_t j = 0; j < nunk; ++j) {
    monos[j] = monomials_up_to(m, algs[j], degree);
    total += monos[j].size();
    if (total > limits().max_columns) {
      throw ResourceCap("ansatz needs more than " + std::to_string(limits().max_columns) + " unknown coefficients");
    }
    begin_.push_back(total);
  }
  cols_.reserve(total);
  std::map<std::pair<std::size_t, Monomial>, std::uint32_t> row_index;
  for (std::size_t j = 0; j < nunk; ++j) {
    for (const auto& mono : monos[j]) {
      auto col = static_cast<std::uint32_t>(cols_.size());
      cols_.emplace_back(j, mono);
      WeylOp basis = WeylOp::monomial(m, mono, Scalar(f, 1));
      for (std::size_t eq = 0; eq < neq; ++eq) {
        const WeylOp& c = coeff(eq, j);
        if (c.is_zero()) continue;
        WeylOp prod = side == Side::Right ? c * basis : basis * c;
        for (const auto& [pm, pc] : prod.terms()) {
          auto [it, fresh] = row_index.try_emplace({eq, pm}, static_cast<std::uint32_t>(rows_.size()));
          if (fresh) rows_.emplace_back();
          rows_[it->second].emplace_back(col, pc);
        }
      }
    }
  }
}

bool AnsatzSystem::kernel_trivial() {
  if (trivial_) return *trivial_;
  if (cols_.empty()) return *(trivial_ = true);
  if (f_.is_rational()) {
    try {
      if (rank_mod_p(rows_, static_cast<std::uint32_t>(cols_.size()), kScreeningPrime) < cols_.size()) {
        // a nontrivial kernel mod p does not imply one over Q
        return *(trivial_ = !kernel_vector().has_value());
      }
      return *(trivial_ = true);
    } catch (const DivisionByZero&) {
      // a denominator divisible by the screening prime: fall through
    }
  }
  return *(trivial_ = exact().rank() == cols_.size());
}

const SparseKernel& AnsatzSystem::exact() {
  if (!exact_) {
    exact_.emplace(f_, static_cast<std::uint32_t>(cols_.size()));
    for (const auto& r : rows_) exact_->add_row(r);
  }
  return *exact_;
}

namespace {

using detail::Echelon;
using detail::ModArith;

// Primes just below 2^62, found on first use.
std::uint64_t nth_prime(std::size_t i) {
  static std::vector<std::uint64_t> primes;
  std::uint64_t next = primes.empty() ? (1ULL << 62) - 1 : primes.back() - 2;
  while (primes.size() <= i) {
    while (!is_prime_u64(next)) next -= 2;
    primes.push_back(next);
    next -= 2;
  }
  return primes[i];
}

// n/d with n = a d mod M, |n|, d <= sqrt(M/2); nullopt if none exists.
std::optional<mpq_class> reconstruct(const mpz_class& a, const mpz_class& modulus) {
  mpz_class bound = sqrt(mpz_class(modulus / 2));
  mpz_class r0 = modulus, r1 = a, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (abs(t1) > bound || t1 == 0) return std::nullopt;
  mpz_class g = gcd(r1, t1);
  if (g != 1) return std::nullopt;
  mpq_class out(r1, t1);
  out.canonicalize();
  return out;
}

// Elimination modulo p that keeps its row operations, so the square system
// formed by the independent rows and the pivot columns can be solved again
// for new right-hand sides.
class TracedEchelon {
public:
  using Row = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

  TracedEchelon(std::uint64_t p, std::uint32_t cols) : a_{p}, by_col_(cols, -1) {}

  void add_row(std::size_t origin, Row row) {
    Row ops, scratch;
    while (!row.empty()) {
      const std::int64_t idx = by_col_[row.front().first];
      if (idx < 0) {
        const std::uint64_t scale = a_.inv(row.front().second);
        for (auto& e : row) e.second = a_.mul(e.second, scale);
        by_col_[row.front().first] = static_cast<std::int64_t>(piv_.size());
        work_ += ops.size() + row.size();
        piv_.push_back({origin, scale, std::move(ops), std::move(row)});
        return;
      }
      const Row& piv = piv_[static_cast<std::size_t>(idx)].row;
      WorkBudget::charge(piv.size());
      const std::uint64_t factor = row.front().second;
      ops.emplace_back(static_cast<std::uint32_t>(idx), factor);
      scratch.clear();
      scratch.reserve(row.size() + piv.size());
      std::size_t i = 1, j = 1;
      while (i < row.size() || j < piv.size()) {
        if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
          scratch.push_back(row[i++]);
        } else if (i == row.size() || piv[j].first < row[i].first) {
          scratch.emplace_back(piv[j].first, a_.sub_mul(0, factor, piv[j].second));
          ++j;
        } else {
          const std::uint64_t v = a_.sub_mul(row[i].second, factor, piv[j].second);
          if (v) scratch.emplace_back(row[i].first, v);
          ++i;
          ++j;
        }
      }
      std::swap(row, scratch);
    }
  }

  std::size_t rank() const { return piv_.size(); }
  std::size_t origin(std::size_t k) const { return piv_[k].origin; }
  bool is_pivot(std::uint32_t c) const { return by_col_[c] >= 0; }
  /// Multiply-adds needed by one solve.
  std::size_t work() const { return work_; }

  std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < by_col_.size(); ++c) {
      if (by_col_[c] < 0) out.push_back(c);
    }
    return out;
  }

  /// Applies the recorded row operations to r (one entry per pivot).
  std::vector<std::uint64_t> forward(std::vector<std::uint64_t> r) const {
    for (std::size_t k = 0; k < piv_.size(); ++k) {
      std::uint64_t v = r[k];
      for (const auto& [j, f] : piv_[k].ops) v = a_.sub_mul(v, f, r[j]);
      r[k] = a_.mul(v, piv_[k].scale);
    }
    return r;
  }

  /// Back substitution; x is 1 at `free_col` (if any) and 0 at the other
  /// free columns. An empty rhs means zero.
  std::vector<std::uint64_t> back(const std::vector<std::uint64_t>& rhs, std::optional<std::uint32_t> free_col) const {
    std::vector<std::uint64_t> x(by_col_.size(), 0);
    if (free_col) x[*free_col] = 1;
    for (std::size_t c = by_col_.size(); c-- > 0;) {
      const std::int64_t k = by_col_[c];
      if (k < 0) continue;
      const Row& row = piv_[static_cast<std::size_t>(k)].row;
      std::uint64_t acc = rhs.empty() ? 0 : rhs[static_cast<std::size_t>(k)];
      for (std::size_t i = 1; i < row.size(); ++i) {
        if (x[row[i].first]) acc = a_.sub_mul(acc, row[i].second, x[row[i].first]);
      }
      x[c] = acc;
    }
    return x;
  }

private:
  struct Pivot {
    std::size_t origin;
    std::uint64_t scale;
    Row ops; ///< (earlier pivot, factor) in the order applied
    Row row;
  };
  ModArith a_;
  std::vector<std::int64_t> by_col_;
  std::vector<Pivot> piv_;
  std::size_t work_ = 0;
};

struct ModularEchelon {
  std::uint64_t p;
  Echelon<ModArith> ech;
};

std::optional<ModularEchelon> modular_echelon(const std::vector<SparseRow>& rows, std::uint32_t cols, std::uint64_t p) {
  ModArith arith{p};
  ModularEchelon out{p, Echelon<ModArith>(arith, cols)};
  try {
    for (const auto& row : rows) {
      Echelon<ModArith>::Row r;
      r.reserve(row.size());
      for (const auto& [c, v] : row) {
        auto x = arith.from_scalar(v);
        if (x) r.emplace_back(c, x);
      }
      out.ech.add_row(std::move(r));
    }
  } catch (const DivisionByZero&) {
    return std::nullopt;
  }
  return out;
}

} // namespace

bool AnsatzSystem::is_kernel_vector(const ScalarVector& v) const {
  for (const auto& row : rows_) {
    Scalar acc(f_);
    for (const auto& [c, x] : row) {
      if (!v[c].is_zero()) acc += x * v[c];
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

std::optional<std::optional<ScalarVector>> AnsatzSystem::padic_lift(const Accept& accept) {
  constexpr int kMaxSteps = 2048;
  const auto ncols = static_cast<std::uint32_t>(cols_.size());
  const std::uint64_t p = kScreeningPrime;

  std::vector<std::vector<std::pair<std::uint32_t, mpz_class>>> irows(rows_.size());
  TracedEchelon ech(p, ncols);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    mpz_class l = 1;
    for (const auto& [c, v] : rows_[i]) l = lcm(l, mpz_class(v.rational_value().get_den()));
    TracedEchelon::Row r;
    for (const auto& [c, v] : rows_[i]) {
      mpq_class scaled = v.rational_value() * l;
      irows[i].emplace_back(c, scaled.get_num());
      if (auto u = mpz_fdiv_ui(irows[i].back().second.get_mpz_t(), p)) r.emplace_back(c, u);
    }
    ech.add_row(i, std::move(r));
  }

  std::optional<std::uint32_t> c0;
  for (auto c : ech.free_columns()) {
    if (!accept || accept(ech.back({}, c))) {
      c0 = c;
      break;
    }
  }
  if (!c0) return std::optional<ScalarVector>{};

  // M x = b on the independent rows, M = pivot columns, b = -(column c0)
  const std::size_t rank = ech.rank();
  std::vector<mpz_class> residual(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    for (const auto& [c, a] : irows[ech.origin(k)]) {
      if (c == *c0) residual[k] = -a;
    }
  }
  std::vector<mpz_class> digits(ncols);
  mpz_class pk = 1;
  std::vector<std::uint64_t> rp(rank);
  std::optional<ScalarVector> previous;
  for (int step = 1; step <= kMaxSteps; ++step) {
    WorkBudget::charge(ech.work());
    for (std::size_t k = 0; k < rank; ++k) rp[k] = mpz_fdiv_ui(residual[k].get_mpz_t(), p);
    const auto y = ech.back(ech.forward(rp), std::nullopt);
    for (std::uint32_t c = 0; c < ncols; ++c) {
      if (y[c]) digits[c] += pk * static_cast<unsigned long>(y[c]);
    }
    for (std::size_t k = 0; k < rank; ++k) {
      mpz_class& s = residual[k];
      for (const auto& [c, a] : irows[ech.origin(k)]) {
        if (y[c]) s -= a * static_cast<unsigned long>(y[c]);
      }
      if (!mpz_divisible_ui_p(s.get_mpz_t(), p)) throw std::logic_error("p-adic residual is not divisible by p");
      mpz_divexact_ui(s.get_mpz_t(), s.get_mpz_t(), p);
    }
    pk *= static_cast<unsigned long>(p);
    if ((step & (step - 1)) != 0 && step % 16 != 0) continue;

    // rational reconstruction with a running common denominator
    const mpz_class bound = sqrt(mpz_class(pk / 2));
    const mpz_class half = pk / 2;
    mpz_class den = 1;
    ScalarVector cand(ncols, Scalar(f_));
    cand[*c0] = Scalar(f_, 1);
    bool ok = true;
    for (std::uint32_t c = 0; c < ncols && ok; ++c) {
      if (digits[c] == 0) continue;
      mpz_class a = digits[c] * den % pk;
      mpz_class sa = a > half ? mpz_class(a - pk) : a;
      mpq_class val;
      if (abs(sa) <= bound) {
        val = mpq_class(sa, den);
      } else if (auto q = reconstruct(a, pk)) {
        val = *q / den;
        den *= q->get_den();
        ok = den <= bound;
      } else {
        ok = false;
      }
      val.canonicalize();
      cand[c] = Scalar(f_, val);
    }
    if (!ok) continue;
    if (is_kernel_vector(cand)) return std::optional<ScalarVector>(std::move(cand));
    // a stable candidate that fails the exact check: the prime lost rank
    if (previous && *previous == cand) return std::nullopt;
    previous = std::move(cand);
  }
  throw ResourceCap("kernel vector coefficients exceed " + std::to_string(kMaxSteps * 61 / 2) + " bits");
}

std::optional<ScalarVector> AnsatzSystem::lift_rational(const Accept& accept) {
  const auto ncols = static_cast<std::uint32_t>(cols_.size());
  std::size_t ref_rank = 0;
  std::vector<std::uint32_t> ref_free;
  std::uint32_t chosen = 0;
  std::vector<mpz_class> residues;
  mpz_class modulus;
  bool have_ref = false;
  for (std::size_t k = 0; k < 64; ++k) {
    auto me = modular_echelon(rows_, ncols, nth_prime(k));
    if (!me) continue;
    const std::size_t rk = me->ech.rank();
    auto free = me->ech.free_columns();
    if (!have_ref || rk > ref_rank) {
      // first prime, or the earlier ones were unlucky
      if (free.empty()) return std::nullopt;
      std::optional<std::uint32_t> pick;
      for (auto c : free) {
        if (!accept || accept(me->ech.kernel_vector(c))) {
          pick = c;
          break;
        }
      }
      if (!pick) return std::nullopt;
      have_ref = true;
      ref_rank = rk;
      ref_free = std::move(free);
      chosen = *pick;
      auto v = me->ech.kernel_vector(chosen);
      residues.assign(v.begin(), v.end());
      modulus = mpz_class(std::to_string(me->p));
    } else if (rk < ref_rank || free != ref_free) {
      continue;
    } else {
      auto v = me->ech.kernel_vector(chosen);
      mpz_class pz(std::to_string(me->p));
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
      for (std::size_t c = 0; c < ncols; ++c) {
        // x = r + M * ((v - r) * M^{-1} mod p)
        mpz_class diff = mpz_class(std::to_string(v[c])) - residues[c];
        mpz_class t = (diff * inv) % pz;
        if (t < 0) t += pz;
        residues[c] += modulus * t;
      }
      modulus *= pz;
    }
    ScalarVector cand(ncols, Scalar(f_));
    bool ok = true;
    for (std::size_t c = 0; c < ncols && ok; ++c) {
      if (residues[c] == 0) continue;
      auto q = reconstruct(residues[c], modulus);
      if (!q) {
        ok = false;
      } else {
        cand[c] = Scalar(f_, *q);
      }
    }
    if (ok && is_kernel_vector(cand)) return cand;
  }
  // fall back to exact elimination
  const SparseKernel& ker = exact();
  for (auto c : ker.free_columns()) {
    ScalarVector v = ker.kernel_vector(c);
    if (!accept) return v;
    std::vector<std::uint64_t> red;
    try {
      for (const auto& x : v) red.push_back(reduce_mod(x.rational_value(), nth_prime(0)));
    } catch (const DivisionByZero&) {
      return v;
    }
    if (accept(red)) return v;
  }
  return std::nullopt;
}

std::optional<ScalarVector> AnsatzSystem::kernel_vector(
    const std::function<bool(const std::vector<std::uint64_t>&)>& accept) {
  if (cols_.empty()) return std::nullopt;
  if (f_.is_rational()) {
    auto lift = [&]() -> std::optional<ScalarVector> {
      if (auto v = padic_lift(accept)) return *v;
      return lift_rational(accept);
    };
    if (accept) return lift();
    if (!any_kernel_) any_kernel_ = lift();
    return *any_kernel_;
  }
  const SparseKernel& ker = exact();
  for (auto c : ker.free_columns()) {
    ScalarVector v = ker.kernel_vector(c);
    if (!accept) return v;
    std::vector<std::uint64_t> red;
    for (const auto& x : v) red.push_back(x.residue());
    if (accept(red)) return v;
  }
  return std::nullopt;
}

std::vector<WeylOp> AnsatzSystem::to_ops(const ScalarVector& v) const {
  std::vector<WeylOp> out(unknowns(), WeylOp(m_, f_));
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    if (!v[c].is_zero()) out[cols_[c].first].add_term(cols_[c].second, v[c]);
  }
  return out;
}

} // namespace dmod
