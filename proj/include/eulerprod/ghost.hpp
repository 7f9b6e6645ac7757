// ghost.hpp
//
// Canonical zeta-factor expansion of a polynomial Euler product. A local
// factor W(p, p^(-s)) with W(0,0)=1 has a unique representation
//
//     W(u, Y) = prod_{m>=1} prod_{n>=0} (1 - u^n Y^m)^(-e(n,m))
//
// with integer exponents e(n,m); globally each factor (1-u^n Y^m)^(-e)
// contributes zeta(ms-n)^e to the product over primes. The exponents are
// obtained by Moebius inversion of the formal logarithm over the divisor
// lattice:
//
//     E_M(u) = (1/M) * sum_{k|M} mu(k) * B_{M/k}(u^k),   B_M = M * b_M,
//
// where log W = sum b_M(u) Y^M. Integrality of every e(n,m) is asserted,
// never assumed, and the expansion is verified against the independent
// product_reconstruct oracle before it is returned.

#ifndef EULERPROD_GHOST_HPP
#define EULERPROD_GHOST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/polynomial.hpp"
#include "eulerprod/primes.hpp"
#include "eulerprod/series.hpp"

namespace eulerprod::ghost {

using eulerprod::poly::BivariatePolynomial;
using eulerprod::poly::RatPoly;
using eulerprod::poly::TruncatedSeries;

struct GhostExpansion {
  int m_max = 0;
  // key (m, n) -> e(n, m); only nonzero exponents are stored, but every row
  // m <= m_max has been computed, so an absent row is an all-zero row.
  std::map<std::pair<int, int>, BigInt> exponents;

  bool empty() const { return exponents.empty(); }

  BigInt exponent(int n, int m) const {
    auto it = exponents.find({m, n});
    return it == exponents.end() ? BigInt(0) : it->second;
  }

  // Nonzero entries of row m as (n, e) pairs, ascending n.
  std::vector<std::pair<int, BigInt>> row(int m) const {
    std::vector<std::pair<int, BigInt>> out;
    for (auto it = exponents.lower_bound({m, 0});
         it != exponents.end() && it->first.first == m; ++it)
      out.emplace_back(it->first.second, it->second);
    return out;
  }

  // Exponent-wise sum (the expansion of a product of local factors).
  friend GhostExpansion operator+(const GhostExpansion& a, const GhostExpansion& b) {
    GhostExpansion r;
    r.m_max = std::min(a.m_max, b.m_max);
    r.exponents = a.exponents;
    for (const auto& [mn, e] : b.exponents) r.exponents[mn] += e;
    std::erase_if(r.exponents,
                  [&](const auto& kv) { return kv.second == 0 || kv.first.first > r.m_max; });
    return r;
  }
};

inline TruncatedSeries product_reconstruct(const GhostExpansion& expansion, int order) {
  if (order > expansion.m_max)
    throw validation_error("expansion depth insufficient for requested order");
  return eulerprod::poly::product_reconstruct(expansion.exponents, order);
}

inline GhostExpansion ghost_expand(const BivariatePolynomial& w, int m_max) {
  if (m_max < 1) throw validation_error("ghost_expand needs depth >= 1");
  TruncatedSeries logw = eulerprod::poly::series_log(w, m_max);

  GhostExpansion out;
  out.m_max = m_max;
  // B_M = M * b_M, with u -> u^k substitutions cached per (M, k).
  std::vector<RatPoly> big_b(m_max + 1);
  for (int m = 1; m <= m_max; ++m) {
    big_b[m] = logw.coefficient(m);
    big_b[m].scale(BigRat(m));
  }
  for (int m = 1; m <= m_max; ++m) {
    RatPoly row;
    for (int k : divisors(m)) {
      int mu = moebius(k);
      if (mu == 0) continue;
      RatPoly t = big_b[m / k].stretch(k);
      t.scale(BigRat(mu));
      row += t;
    }
    row.scale(BigRat(1, m));
    if (!row.is_integral())
      throw certification_error("non-integer Witt exponent in row m=" + std::to_string(m));
    for (int n = 0; n <= row.degree(); ++n) {
      const BigRat& c = row[n];
      if (c != 0) out.exponents[{m, n}] = numerator(c);
    }
  }

  // Reconstruction check against the independent oracle.
  TruncatedSeries check = product_reconstruct(out, m_max);
  TruncatedSeries source = TruncatedSeries::from_polynomial(w, m_max);
  if (!(check == source))
    throw certification_error("ghost expansion failed reconstruction check");
  return out;
}

// Upper bound max{(n+1)/m} for the abscissa of absolute convergence of the
// product over primes; exact when all coefficients are nonnegative. Returns
// nothing for W == 1.
inline std::optional<BigRat> convergence_abscissa(const BivariatePolynomial& w) {
  std::optional<BigRat> best;
  for (const auto& [mn, c] : w.terms_by_m()) {
    auto [m, n] = mn;
    if (m == 0) continue;
    BigRat r(n + 1, m);
    if (!best || r > *best) best = r;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Candidate natural boundary: the ratios n/m over nonzero exponents. The
// finite-truncation proxy for the largest limit point is the sup over the
// top half of the computed rows.
// ---------------------------------------------------------------------------
struct BoundaryEstimate {
  struct Row {
    int m = 0;
    int n_at_max = 0;
    BigRat max_ratio;
  };
  std::optional<BigRat> global_sup;
  int global_n = 0, global_m = 0;
  std::optional<BigRat> tail_sup;
  int tail_n = 0, tail_m = 0;
  std::vector<Row> per_m;
  std::string pattern_note;  // report annotation only, never used in results
};

inline BoundaryEstimate candidate_boundary(const GhostExpansion& expansion) {
  BoundaryEstimate est;
  int tail_from = expansion.m_max / 2 + 1;
  for (int m = 1; m <= expansion.m_max; ++m) {
    int n_best = -1;
    for (const auto& [n, e] : expansion.row(m)) n_best = std::max(n_best, n);
    if (n_best < 0) continue;
    BigRat ratio(n_best, m);
    est.per_m.push_back({m, n_best, ratio});
    if (!est.global_sup || ratio > *est.global_sup) {
      est.global_sup = ratio;
      est.global_n = n_best;
      est.global_m = m;
    }
    if (m >= tail_from && (!est.tail_sup || ratio > *est.tail_sup)) {
      est.tail_sup = ratio;
      est.tail_n = n_best;
      est.tail_m = m;
    }
  }
  // Annotate an arithmetic progression among the tail maximizers if present.
  std::vector<std::pair<int, int>> tail_args;
  for (const auto& r : est.per_m)
    if (r.m >= tail_from) tail_args.emplace_back(r.m, r.n_at_max);
  if (tail_args.size() >= 3) {
    int dm = tail_args[1].first - tail_args[0].first;
    int dn = tail_args[1].second - tail_args[0].second;
    bool ap = dm > 0;
    for (std::size_t i = 2; i < tail_args.size() && ap; ++i)
      ap = (tail_args[i].first - tail_args[i - 1].first == dm) &&
           (tail_args[i].second - tail_args[i - 1].second == dn);
    if (ap)
      est.pattern_note = "tail maximizers follow (n, m) = (" +
                         std::to_string(tail_args[0].second) + " + " + std::to_string(dn) +
                         "k, " + std::to_string(tail_args[0].first) + " + " +
                         std::to_string(dm) + "k)";
  }
  return est;
}

// ---------------------------------------------------------------------------
// Termination test: does the expansion stop, i.e. is W a finite product of
// factors (1 - u^n Y^m)? If the candidate factor list reproduces W as an
// exact polynomial identity (cross-multiplied, not merely mod Y^(M+1)),
// the product over primes continues to the whole plane.
// ---------------------------------------------------------------------------
struct EstermannReport {
  bool terminated = false;
  std::vector<std::tuple<int, int, BigInt>> factors;  // (n, m, e)
  // Y-order through which the discovered factors match W: the full exact
  // identity when terminated, otherwise the verified truncation depth.
  int agreement_order = 0;
};

inline EstermannReport estermann_check(const BivariatePolynomial& w, int m_max) {
  EstermannReport rep;
  GhostExpansion expansion = ghost_expand(w, m_max);
  for (const auto& [mn, e] : expansion.exponents)
    rep.factors.emplace_back(mn.second, mn.first, e);
  rep.agreement_order = m_max;

  // Exact identity check: W * prod_{e>0} (1-u^n Y^m)^e == prod_{e<0} (1-u^n Y^m)^(-e).
  // Only attempted when the computed rows leave headroom below m_max and the
  // factor multiplicities are small enough to be a genuine finite
  // factorization (a terminating expansion has total Y-mass tied to deg_Y W).
  int top_row = 0;
  BigInt total_mass = 0;
  for (const auto& [mn, e] : expansion.exponents) {
    top_row = std::max(top_row, mn.first);
    total_mass += abs(e);
  }
  if ((top_row >= m_max && !expansion.exponents.empty()) || total_mass > 1000) return rep;

  BivariatePolynomial lhs = w, rhs;
  for (const auto& [mn, e] : expansion.exponents) {
    auto [m, n] = mn;
    std::map<std::pair<int, int>, BigInt> f{{{0, 0}, 1}, {{n, m}, -1}};
    BivariatePolynomial factor = BivariatePolynomial::from_terms(f);
    BigInt reps = abs(e);
    for (BigInt i = 0; i < reps; ++i) {
      if (e > 0)
        lhs = lhs * factor;
      else
        rhs = rhs * factor;
    }
  }
  if (lhs == rhs) {
    rep.terminated = true;
    rep.agreement_order = 0;  // identity is exact, no truncation involved
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Prime-density diagnostic along the candidate boundary. Counts the prime
// set P prescribed by either variant and tabulates window counts
// P((1+eps)x) - P(x) against the reference curve x^((sqrt5-1)/2) log^2 x.
// A finite-range diagnostic, not a proof.
// ---------------------------------------------------------------------------
enum class DensityVariant { theorem1, theorem2 };

struct DensityReport {
  DensityVariant variant = DensityVariant::theorem1;
  BigRat beta_used;
  BigRat epsilon;
  std::vector<std::uint32_t> member_primes;
  std::vector<std::pair<double, long>> prime_counts;        // (x, P(x))
  std::vector<std::pair<double, long>> window_counts;       // (x, P((1+eps)x)-P(x))
  std::vector<std::pair<double, double>> reference_curve;   // (x, x^theta log^2 x)
  std::string verdict = "finite-range diagnostic, not a proof";
};

inline DensityReport boundary_prime_density(const GhostExpansion& expansion,
                                            DensityVariant variant,
                                            std::optional<BigRat> beta,
                                            const BigRat& epsilon,
                                            const std::vector<double>& x_grid) {
  DensityReport rep;
  rep.variant = variant;
  rep.epsilon = epsilon;
  if (variant == DensityVariant::theorem2) {
    if (!beta) throw validation_error("variant theorem2 requires beta");
    rep.beta_used = *beta;
  } else {
    rep.beta_used = BigRat(1, 2);
  }

  double x_max = 0;
  for (double x : x_grid) x_max = std::max(x_max, x);
  double eps_d = rat_to_double(epsilon);
  double reach = x_max * (1.0 + eps_d);
  if (reach > expansion.m_max)
    throw validation_error("expansion depth insufficient for requested x range");

  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(reach))) {
    bool member = false;
    if (variant == DensityVariant::theorem1) {
      // Factors zeta(p*s - n) matching the shape zeta(p(s-1/2)+1/2) need
      // n = (p-1)/2; membership asks for a positive exponent there.
      if (p % 2 == 1 && expansion.exponent(static_cast<int>((p - 1) / 2),
                                           static_cast<int>(p)) > 0)
        member = true;
    } else {
      for (const auto& [n, e] : expansion.row(static_cast<int>(p))) {
        (void)e;
        // n/p + 1/(2p) > beta  <=>  2n + 1 > 2*p*beta
        if (BigRat(2 * n + 1) > BigRat(2 * p) * rep.beta_used) {
          member = true;
          break;
        }
      }
    }
    if (member) rep.member_primes.push_back(p);
  }

  auto count_below = [&](double x) {
    return static_cast<long>(std::upper_bound(rep.member_primes.begin(),
                                              rep.member_primes.end(), x) -
                             rep.member_primes.begin());
  };
  const double theta = 0.61803398874989484820L;  // (sqrt(5)-1)/2
  for (double x : x_grid) {
    long px = count_below(x);
    long pwin = count_below(x * (1.0 + eps_d)) - px;
    rep.prime_counts.emplace_back(x, px);
    rep.window_counts.emplace_back(x, pwin);
    double logx = std::log(x);
    rep.reference_curve.emplace_back(x, std::pow(x, theta) * logx * logx);
  }
  return rep;
}

}  // namespace eulerprod::ghost

#endif  // EULERPROD_GHOST_HPP
