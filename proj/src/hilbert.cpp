#include "dmod/hilbert.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "dmod/echelon.hpp"
#include "dmod/solver.hpp"

namespace dmod {

namespace {

long binom(long n, long k) {
  if (k < 0 || n < k) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r.get_si();
}

int ord_d(const WeylOp& a) { return filtration_degree(a, DegreeKind::OrdD); }

// Columns are (order o, coordinate i, derivation exponent a) with |a| = o,
// numbered so that higher orders come first.
class ColumnIndex {
public:
  ColumnIndex(int m, int n, int top) : m_(m), n_(n), top_(top), start_(top + 1), ranks_(top + 1) {
    std::uint32_t acc = 0;
    for (int o = top; o >= 0; --o) {
      start_[o] = acc;
      acc += static_cast<std::uint32_t>(n * binom(o + m - 1, m - 1));
    }
    total_ = acc;
  }

  std::uint32_t total() const { return total_; }

  std::uint32_t operator()(int i, const Exponents& a) {
    int o = 0;
    for (int k = 0; k < m_; ++k) o += a[k];
    if (o > top_) throw std::logic_error("column order above the Macaulay level");
    auto& rank = ranks_[o];
    if (rank.empty()) {
      for (const auto& mono : monomials_up_to(m_, VarIndexSet(m_), o)) {
        if (mono.xdegree() == o) {
          Exponents e = mono.x;
          rank.emplace(e, static_cast<std::uint32_t>(rank.size()));
        }
      }
    }
    const auto width = static_cast<std::uint32_t>(rank.size());
    return start_[o] + static_cast<std::uint32_t>(i) * width + rank.at(a);
  }

  int order_of(std::uint32_t col) const {
    for (int o = 0; o <= top_; ++o) {
      if (col >= start_[o]) return o;
    }
    return 0;
  }

private:
  int m_, n_, top_;
  std::vector<std::uint32_t> start_;
  std::vector<std::map<Exponents, std::uint32_t>> ranks_;
  std::uint32_t total_ = 0;
};

struct Trial {
  std::vector<std::uint64_t> point;
  std::vector<std::vector<std::uint64_t>> powers;
  detail::Echelon<detail::ModArith> ech;

  std::uint64_t power(int k, int e) {
    auto& pw = powers[k];
    while (static_cast<int>(pw.size()) <= e) pw.push_back(detail::ModArith{ech_p}.mul(pw.back(), point[k]));
    return pw[e];
  }
  std::uint64_t ech_p;
};

} // namespace

ModulePresentation::ModulePresentation(int m, Field f, int n, std::vector<std::vector<WeylOp>> generators)
    : m_(m), f_(f), n_(n), gens_(std::move(generators)) {
  if (m < 1 || m > kMaxVars) throw InvalidArgument("m out of range");
  if (n < 1) throw InvalidArgument("module rank n must be positive");
  if (gens_.empty()) throw InvalidArgument("at least one generator is required");
  for (const auto& g : gens_) {
    if (static_cast<int>(g.size()) != n) throw InvalidArgument("generator length differs from n");
    bool nonzero = false;
    for (const auto& e : g) {
      if (e.m() != m || e.field() != f) throw FieldMismatch("generator entry over a different algebra");
      nonzero = nonzero || !e.is_zero();
    }
    if (!nonzero) throw InvalidArgument("zero generator");
  }
}

int ModulePresentation::d() const {
  int d = 0;
  for (int j = 0; j < s(); ++j) d = std::max(d, order(j));
  return d;
}

int ModulePresentation::order(int j) const {
  int o = -1;
  for (const auto& e : gens_[j]) o = std::max(o, ord_d(e));
  return o;
}

HilbertValues hilbert_values(const ModulePresentation& l, int zmax, int k_stab, std::uint64_t seed) {
  if (zmax < 0) throw InvalidArgument("z must be non-negative");
  const int m = l.m(), n = l.n(), s = l.s();
  const Field f = l.field();
  const std::uint64_t p = f.is_rational() ? kScreeningPrime : f.p;
  const int kcap = zmax + 4 * l.d() * s;
  const int top = zmax + kcap;
  ColumnIndex index(m, n, top);

  std::mt19937_64 rng(seed);
  constexpr std::int64_t kBound = std::int64_t{1} << 16;
  std::uniform_int_distribution<std::int64_t> coord(-kBound, kBound);
  std::vector<Trial> trials;
  for (int t = 0; t < 3; ++t) {
    Trial tr{{}, {}, detail::Echelon<detail::ModArith>(detail::ModArith{p}, index.total()), p};
    for (int k = 0; k < m; ++k) {
      std::int64_t v = coord(rng) % static_cast<std::int64_t>(p);
      tr.point.push_back(static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(p) : v));
      tr.powers.push_back({1});
    }
    trials.push_back(std::move(tr));
  }

  auto add_element = [&](const std::vector<WeylOp>& elem) {
    for (auto& tr : trials) {
      detail::ModArith arith{p};
      std::map<std::uint32_t, std::uint64_t> acc;
      for (int i = 0; i < n; ++i) {
        for (const auto& [mono, c] : elem[i].terms()) {
          std::uint64_t v = arith.from_scalar(c);
          for (int k = 0; k < m; ++k) {
            if (mono.x[k]) v = arith.mul(v, tr.power(k, mono.x[k]));
          }
          auto& slot = acc[index(i, mono.d)];
          slot = (slot + v) % p;
        }
      }
      detail::Echelon<detail::ModArith>::Row row;
      for (const auto& [col, v] : acc) {
        if (v) row.emplace_back(col, v);
      }
      tr.ech.add_row(std::move(row));
    }
  };

  // frontier[j]: D^b w_j for |b| = current level - ord(w_j)
  std::vector<std::map<Exponents, std::vector<WeylOp>>> frontier(s);
  std::vector<int> ord(s);
  for (int j = 0; j < s; ++j) ord[j] = l.order(j);
  std::vector<WeylOp> dops;
  for (int k = 1; k <= m; ++k) dops.push_back(WeylOp::d(m, f, k));
  auto add_level = [&](int level) {
    for (int j = 0; j < s; ++j) {
      const int size = level - ord[j];
      if (size < 0) continue;
      if (size == 0) {
        frontier[j] = {{Exponents{}, l.generators()[j]}};
      } else {
        std::map<Exponents, std::vector<WeylOp>> next;
        for (const auto& [b, elem] : frontier[j]) {
          for (int k = 0; k < m; ++k) {
            Exponents nb = b;
            ++nb[k];
            if (next.count(nb)) continue;
            std::vector<WeylOp> prod;
            prod.reserve(n);
            for (const auto& e : elem) prod.push_back(dops[k] * e);
            next.emplace(nb, std::move(prod));
          }
        }
        frontier[j] = std::move(next);
      }
      for (const auto& [b, elem] : frontier[j]) add_element(elem);
    }
  };

  auto estimate = [&]() {
    long rank = 0;
    std::vector<long> high(zmax + 1, 0);
    for (const auto& tr : trials) {
      std::vector<long> by_order(top + 1, 0);
      for (const auto& [col, row] : tr.ech.pivots()) ++by_order[index.order_of(col)];
      rank = std::max(rank, static_cast<long>(tr.ech.rank()));
      for (int z = 0; z <= zmax; ++z) {
        long h = 0;
        for (int o = z + 1; o <= top; ++o) h += by_order[o];
        high[z] = std::max(high[z], h);
      }
    }
    std::vector<long> hf(zmax + 1);
    for (int z = 0; z <= zmax; ++z) hf[z] = n * binom(z + m, m) - (rank - high[z]);
    return hf;
  };

  HilbertValues out;
  for (int level = 0; level <= zmax; ++level) add_level(level);
  out.levels.push_back(estimate());
  int same = 0;
  for (int k = 1; k <= kcap; ++k) {
    add_level(zmax + k);
    out.levels.push_back(estimate());
    same = out.levels.back() == out.levels[out.levels.size() - 2] ? same + 1 : 0;
    if (same >= k_stab) {
      out.stabilized = true;
      break;
    }
  }
  out.hf = out.levels.back();
  return out;
}

long hilbert_function(const ModulePresentation& l, int z, int k_stab, std::uint64_t seed) {
  return hilbert_values(l, z, k_stab, seed).hf.back();
}

HKFit hk_fit(const std::vector<long>& hf) {
  const int len = static_cast<int>(hf.size());
  std::vector<mpz_class> diff(hf.begin(), hf.end());
  // diff holds the t-th differences; the tail where the (t+1)-st vanish has
  // to cover at least t + 3 values of hf
  for (int t = 0; t + 3 <= len; ++t) {
    std::vector<mpz_class> next;
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
    int zeros = 0;
    while (zeros < static_cast<int>(next.size()) && next[next.size() - 1 - zeros] == 0) ++zeros;
    const int covered = zeros + t + 1;
    if (zeros >= 2 && covered >= t + 3) {
      HKFit fit;
      fit.tail_start = len - covered;
      if (t == 0 && hf.back() == 0) {
        fit.t = -1;
        fit.l = 0;
        return fit;
      }
      // Newton form at z0: sum_k delta^k hf(z0) C(z - z0, k)
      const int z0 = fit.tail_start;
      std::vector<mpz_class> delta{mpz_class(hf[z0])};
      std::vector<mpz_class> row(hf.begin() + z0, hf.end());
      for (int k = 1; k <= t; ++k) {
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
        row.pop_back();
        delta.push_back(row.front());
      }
      std::vector<mpq_class> poly(t + 1, 0);
      std::vector<mpq_class> basis{1}; // C(z - z0, k) in powers of z
      mpz_class fact = 1;
      for (int k = 0; k <= t; ++k) {
        if (k > 0) {
          fact *= k;
          std::vector<mpq_class> nb(basis.size() + 1, 0);
          const mpq_class shift(-(z0 + k - 1));
          for (std::size_t e = 0; e < basis.size(); ++e) {
            nb[e + 1] += basis[e];
            nb[e] += basis[e] * shift;
          }
          for (auto& c : nb) c /= k;
          basis = std::move(nb);
        }
        for (std::size_t e = 0; e < basis.size(); ++e) poly[e] += basis[e] * mpq_class(delta[k]);
      }
      fit.t = t;
      fit.poly = std::move(poly);
      fit.l = fit.poly.back() * mpq_class(fact);
      return fit;
    }
    diff = std::move(next);
  }
  throw NotStabilized("no polynomial tail in " + std::to_string(len) + " values");
}

std::string poly_to_string(const std::vector<mpq_class>& poly) {
  std::string out;
  for (int e = static_cast<int>(poly.size()) - 1; e >= 0; --e) {
    const mpq_class& c = poly[e];
    if (c == 0) continue;
    mpq_class mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string var = e == 0 ? "" : (e == 1 ? "z" : "z^" + std::to_string(e));
    if (e == 0) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += var;
    } else {
      out += mag.get_str() + "*" + var;
    }
  }
  return out.empty() ? "0" : out;
}

mpz_class bezout_bound(int n, int s, int m, int d, int t) {
  if (n < 1 || s < 1 || m < 1 || d < 0 || t < 0 || t > m) throw InvalidArgument("bezout_bound arguments out of range");
  if (t == m) return n;
  mpz_class base = 4 * m * m * d * std::min(n, s);
  mpz_class four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(m - t - 1));
  mpz_class exp = four_pow * 2 * (m - t);
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp.get_ui());
  return r * n;
}

long kolchin_sum(const ModulePresentation& l) {
  long sum = 0;
  for (int i = 0; i < l.n(); ++i) {
    int best = 0;
    for (int j = 0; j < l.s(); ++j) best = std::max(best, ord_d(l.entry(i, j)));
    sum += best;
  }
  return sum;
}

std::optional<PrincipalElement> principal_element(const ModulePresentation& l, int i0, const VarIndexSet& k,
                                                  std::uint64_t seed) {
  const int m = l.m(), n = l.n(), s = l.s();
  const Field f = l.field();
  if (i0 < 1 || i0 > n) throw IndexOutOfRange("coordinate " + std::to_string(i0));
  if (k.m() != m) throw InvalidArgument("K has the wrong number of variables");
  // sum_j C_j w_{i,j} = e_i0 turns into sum_j adj(w_{i,j}) adj(C_j) = e_i0
  OpMatrix a(m, f, n, s);
  std::vector<WeylOp> rhs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < s; ++j) a.at(i, j) = adjoint(l.entry(i, j));
    rhs.push_back(WeylOp::constant(m, f, i + 1 == i0 ? 1 : 0));
  }
  LinearSystem sys(FractionContext::standard(m, f, k), a, rhs);
  SolveOutcome res = decide_solve(sys, seed);
  if (res.status == SolveStatus::Unsolvable) return std::nullopt;
  if (res.status != SolveStatus::Solved) throw ResourceCap(res.note);

  std::vector<WeylOp> dens;
  for (const auto& v : res.solution) dens.push_back(v.den());
  CommonMultiple cm = common_multiple(dens, Side::Right, k);
  PrincipalElement out;
  out.b = adjoint(cm.value);
  for (int j = 0; j < s; ++j) out.coeffs.push_back(adjoint(res.solution[j].num() * cm.c[j]));

  if (!out.b.in_subalgebra(k)) throw std::logic_error("principal element outside A^(K)");
  for (int i = 0; i < n; ++i) {
    WeylOp acc(m, f);
    for (int j = 0; j < s; ++j) acc += out.coeffs[j] * l.entry(i, j);
    const WeylOp expect = i + 1 == i0 ? out.b : WeylOp(m, f);
    if (!(acc == expect)) throw std::logic_error("principal element fails the membership check");
  }
  return out;
}

std::vector<VarIndexSet> default_k_sequence(int m, int t) {
  if (t < 0 || t >= m) throw InvalidArgument("need 0 <= t < m");
  std::vector<VarIndexSet> out;
  for (int start = 1; start + t <= m; ++start) {
    VarIndexSet k(m);
    for (int i = start; i <= start + t; ++i) k = k.with(i);
    out.push_back(k);
  }
  return out;
}

HKReport bezout_check(const ModulePresentation& l, int zmax, std::uint64_t seed) {
  HilbertValues hv = hilbert_values(l, zmax, 2, seed);
  HKFit fit = hk_fit(hv.hf);
  HKReport rep;
  for (int z = 0; z <= zmax; ++z) rep.hf.emplace_back(z, hv.hf[z]);
  rep.t = fit.t;
  rep.l = fit.l;
  rep.poly = fit.poly;
  rep.stabilized = hv.stabilized;
  rep.note = "ranks over F(X) by random specialization (Monte Carlo)";
  if (!hv.stabilized) rep.note += "; extension level cap reached before the values repeated";
  if (fit.t >= 0) {
    rep.bezout = bezout_bound(l.n(), l.s(), l.m(), l.d(), fit.t);
    rep.satisfied = mpq_class(*rep.bezout) >= rep.l;
    if (l.m() - fit.t == 1) {
      rep.kolchin = kolchin_sum(l);
      rep.satisfied = rep.satisfied && rep.l <= *rep.kolchin;
    }
  }
  return rep;
}

} // namespace dmod
