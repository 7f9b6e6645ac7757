// dirichlet.hpp
//
// Dirichlet-series machinery for products  prod_p W(p, p^-s)  times explicit
// zeta prefactors zeta(a*s-b)^c:
//
//  - exact local factor series and a multiplicative coefficient sieve;
//  - an independent coefficient route through the ghost expansion
//    (exact Dirichlet convolution of zeta-factor series), used as the
//    dual-route oracle against the sieve;
//  - numeric evaluation of the Euler product with zeta-factor acceleration:
//        prod_p W = prod_{m<=M} zeta(ms-n)^e(n,m) * prod_{p<=P} R_M(p, p^-s),
//    where R_M = W * prod (1 - u^n Y^m)^e is 1 + O(Y^(M+1)), so the dropped
//    tail p > P decays like p^(deg_u - (M+1) Re s) and is bounded explicitly
//    from the exact remainder series.

#ifndef EULERPROD_DIRICHLET_HPP
#define EULERPROD_DIRICHLET_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/ghost.hpp"
#include "eulerprod/polynomial.hpp"
#include "eulerprod/primes.hpp"
#include "eulerprod/series.hpp"
#include "eulerprod/zeta.hpp"

namespace eulerprod::dirichlet {

using eulerprod::ghost::GhostExpansion;
using eulerprod::poly::BivariatePolynomial;
using eulerprod::zetanum::Complex;

struct ZetaFactor {
  int a = 1;       // zeta(a*s - b)^c
  int b = 0;
  BigInt c = 1;
};

struct ProductSpec {
  BivariatePolynomial w;
  std::vector<ZetaFactor> prefactors;
  int variable_scale = 1;  // k such that the user-facing series lives in w = s/k

  void validate() const {
    if (variable_scale < 1) throw validation_error("variable_scale must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& f : prefactors) {
      if (f.a < 1 || f.b < 0 || f.c == 0)
        throw validation_error("prefactor needs a >= 1, b >= 0, c != 0");
      if (!seen.insert({f.a, f.b}).second)
        throw validation_error("duplicate prefactor (a, b)");
    }
  }
};

struct CoefficientArray {
  long n_bound = 0;
  std::vector<BigInt> values;  // values[n] for 1 <= n <= n_bound; values[0] unused
  enum class Support { none, powers } support_note = Support::none;
  int power = 1;  // with Support::powers, a_n = 0 unless n = m^power

  const BigInt& at(long n) const { return values.at(static_cast<std::size_t>(n)); }
};

// ---------------------------------------------------------------------------
// Exact local factor: coefficients of p^(-js), j = 0..k_max, of
// W(p, p^-s) * prod (1 - p^b p^(-as))^(-c).
// ---------------------------------------------------------------------------
inline std::vector<BigInt> local_factor_series(const ProductSpec& spec, std::uint64_t p,
                                               int k_max) {
  spec.validate();
  if (!is_prime(p)) throw validation_error("local_factor_series: p is not prime");
  if (k_max < 0) throw validation_error("local_factor_series: k_max must be >= 0");

  std::vector<BigInt> acc(k_max + 1);
  acc[0] = 0;
  // W(p, Y) exactly.
  for (const auto& [mn, c] : spec.w.terms_by_m()) {
    auto [m, n] = mn;
    if (m > k_max) continue;
    BigInt pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    acc[m] += c * pn;
  }
  // Prefactor local series.
  for (const auto& f : spec.prefactors) {
    std::vector<BigInt> fac(k_max + 1);
    BigInt pb = 1;
    for (int i = 0; i < f.b; ++i) pb *= p;
    BigInt pbk = 1;
    for (int j = 0; j * f.a <= k_max; ++j) {
      BigInt coef = (f.c > 0) ? binomial(f.c + j - 1, j)
                              : ((j % 2) ? -binomial(-f.c, j) : binomial(-f.c, j));
      fac[j * f.a] = coef * pbk;
      pbk *= pb;
    }
    std::vector<BigInt> next(k_max + 1);
    for (int i = 0; i <= k_max; ++i) {
      if (acc[i] == 0) continue;
      for (int j = 0; i + j <= k_max; ++j)
        if (fac[j] != 0) next[i + j] += acc[i] * fac[j];
    }
    acc = std::move(next);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Multiplicative sieve: assembles a_n from local factors over prime powers.
// With variable_scale = k the output is re-indexed so a_(m^k) carries the
// coefficient of m^(-s) and a_n = 0 off k-th powers.
// ---------------------------------------------------------------------------
inline CoefficientArray coefficient_sieve(const ProductSpec& spec, long n_bound) {
  spec.validate();
  if (n_bound < 1) throw validation_error("coefficient_sieve: N >= 1 required");
  int k = spec.variable_scale;
  long m_bound = n_bound;
  if (k > 1) {
    m_bound = static_cast<long>(std::floor(std::pow(static_cast<double>(n_bound),
                                                    1.0 / k) + 1e-9));
    while (true) {
      // integer-exact boundary correction
      BigInt pw = 1;
      for (int i = 0; i < k; ++i) pw *= (m_bound + 1);
      if (pw <= n_bound) ++m_bound; else break;
    }
  }

  std::vector<BigInt> coeff(m_bound + 1);
  coeff[1] = 1;
  auto primes = primes_up_to(static_cast<std::uint32_t>(m_bound));
  // Local series per prime, then depth-first assembly over coprime parts.
  std::vector<std::vector<BigInt>> locals(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    int kmax = 0;
    long pp = 1;
    while (pp <= m_bound / primes[i]) {
      pp *= primes[i];
      ++kmax;
    }
    locals[i] = local_factor_series(spec, primes[i], kmax);
  }
  struct Frame {
    std::size_t idx;
    long n;
    BigInt val;
  };
  std::vector<Frame> stack{{0, 1, BigInt(1)}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (std::size_t i = f.idx; i < primes.size(); ++i) {
      long p = primes[i];
      if (p > m_bound / f.n) break;
      long n = f.n;
      for (int j = 1;; ++j) {
        if (n > m_bound / p) break;
        n *= p;
        BigInt val = f.val * locals[i][j];
        coeff[n] = val;
        if (val != 0 && i + 1 < primes.size()) stack.push_back({i + 1, n, val});
      }
    }
  }

  CoefficientArray out;
  out.n_bound = n_bound;
  if (k == 1) {
    coeff.resize(n_bound + 1);
    out.values = std::move(coeff);
  } else {
    out.values.assign(n_bound + 1, BigInt(0));
    for (long m = 1; m <= m_bound; ++m) {
      BigInt idx = 1;
      for (int i = 0; i < k; ++i) idx *= m;
      out.values[static_cast<long>(idx)] = coeff[m];
    }
    out.support_note = CoefficientArray::Support::powers;
    out.power = k;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dual route: Dirichlet coefficients of prod zeta(ms-n)^e(n,m) (expansion
// rows plus explicit prefactors) by exact Dirichlet convolution. Valid while
// every prime power p^j <= N has j <= m_max, i.e. N < 2^(m_max+1).
// ---------------------------------------------------------------------------
inline CoefficientArray coefficients_via_zeta_product(const GhostExpansion& expansion,
                                                      const std::vector<ZetaFactor>& prefactors,
                                                      long n_bound) {
  if (n_bound < 1) throw validation_error("N >= 1 required");
  double depth_limit = std::pow(2.0, expansion.m_max + 1);
  if (static_cast<double>(n_bound) >= depth_limit)
    throw validation_error("N too large for expansion depth");

  std::map<std::pair<int, int>, BigInt> factors;  // (a, b) -> exponent
  for (const auto& [mn, e] : expansion.exponents) factors[{mn.first, mn.second}] += e;
  for (const auto& f : prefactors) factors[{f.a, f.b}] += f.c;

  std::vector<BigInt> acc(n_bound + 1);
  acc[1] = 1;
  for (const auto& [ab, e] : factors) {
    if (e == 0) continue;
    auto [a, b] = ab;
    // Series of zeta(a*s-b)^e: supported on k^a, multiplicative with
    // p^(a j) -> binom(e+j-1, j) p^(b j)   (negative e through the
    // alternating binomial; mu-inversion is the j<=1 special case).
    std::vector<std::pair<long, BigInt>> fac;  // (index, value), index ascending
    long k_lim = 1;
    while (true) {
      BigInt pw = 1;
      for (int i = 0; i < a; ++i) pw *= (k_lim + 1);
      if (pw <= n_bound) ++k_lim; else break;
    }
    {
      // assemble multiplicatively over k <= k_lim
      std::vector<BigInt> g(k_lim + 1);
      g[1] = 1;
      for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(k_lim))) {
        std::vector<BigInt> next = g;
        BigInt pb = 1;
        for (int i = 0; i < b; ++i) pb *= p;
        BigInt pbj = 1;
        long pj = 1;
        for (int j = 1;; ++j) {
          if (pj > k_lim / p) break;
          pj *= p;
          pbj *= pb;
          BigInt coef = (e > 0) ? binomial(e + j - 1, j)
                                : ((j % 2) ? -binomial(-e, j) : binomial(-e, j));
          if (coef == 0) continue;
          for (long q = 1; q * pj <= k_lim; ++q) {
            if (q % p == 0 || g[q] == 0) continue;
            next[q * pj] = g[q] * coef * pbj;
          }
        }
        g = std::move(next);
      }
      for (long kk = 1; kk <= k_lim; ++kk) {
        if (g[kk] == 0) continue;
        BigInt idx = 1;
        for (int i = 0; i < a; ++i) idx *= kk;
        fac.emplace_back(static_cast<long>(idx), g[kk]);
      }
    }
    // Dirichlet convolution acc *= fac.
    std::vector<BigInt> next(n_bound + 1);
    for (const auto& [j, v] : fac) {
      for (long i = 1; i * j <= n_bound; ++i) {
        if (acc[i] == 0) continue;
        next[i * j] += acc[i] * v;
      }
    }
    acc = std::move(next);
  }

  CoefficientArray out;
  out.n_bound = n_bound;
  out.values = std::move(acc);
  return out;
}

// ---------------------------------------------------------------------------
// Accelerated numeric Euler product.
// ---------------------------------------------------------------------------
struct EulerProductValue {
  Complex value;
  long double abs_error = 0.0L;
};

class AcceleratedProduct {
 public:
  AcceleratedProduct(const BivariatePolynomial& w, int depth, long prime_cutoff)
      : w_(w), depth_(depth), prime_cutoff_(prime_cutoff) {
    if (!w.is_one()) expansion_ = eulerprod::ghost::ghost_expand(w, depth);
    expansion_.m_max = depth;
    primes_ = primes_up_to(static_cast<std::uint32_t>(prime_cutoff));
    // Exact remainder series beyond the retained depth: orders depth+1..depth+3.
    int probe = depth + 3;
    auto r = eulerprod::poly::TruncatedSeries::from_polynomial(w_, probe);
    for (const auto& [mn, e] : expansion_.exponents)
      r.mul_geometric_power(mn.second, mn.first, -e);
    for (int m = depth + 1; m <= probe; ++m) {
      const auto& c = r.coefficient(m);
      for (int n = 0; n <= c.degree(); ++n)
        if (c[n] != 0)
          remainder_terms_.push_back({n, m, std::fabs(static_cast<long double>(BigRat(c[n])))});
    }
    for (const auto& [mn, e] : expansion_.exponents) {
      exponents_ld_.emplace_back(mn, static_cast<long double>(e));
      max_n_ = std::max(max_n_, mn.second);
    }
    for (const auto& [mn, c] : w_.terms_by_m()) {
      w_coeff_ld_[mn] = static_cast<long double>(c);
      max_n_ = std::max(max_n_, mn.second);
    }
    if (max_n_ >= 160 || std::max(depth_, w_.y_degree()) >= 64)
      throw validation_error("acceleration depth/degree beyond the supported range");
  }

  const GhostExpansion& expansion() const { return expansion_; }
  int depth() const { return depth_; }
  long prime_cutoff() const { return prime_cutoff_; }

  // Value of prod_p W(p, p^-s) continued through the retained zeta factors.
  // `skip` lists retained rows (m, n) to divide out (pole/zero bookkeeping
  // for residues and zero terms); the remainder product is unaffected.
  EulerProductValue eval(const Complex& s,
                         const std::set<std::pair<int, int>>& skip = {}) const {
    if (w_.is_one()) return {Complex(1.0L, 0.0L), 0.0L};
    check_convergence(s.real());

    Complex log_acc = 0.0L;
    long double zeta_calls = 0.0L;
    for (const auto& [mn, e] : expansion_.exponents) {
      if (skip.count(mn)) continue;
      auto [m, n] = mn;
      Complex arg(m * s.real() - n, m * s.imag());
      if (arg == Complex(1.0L, 0.0L))
        throw validation_error("retained zeta factor hits its pole; exclude it first");
      Complex z = eulerprod::zetanum::zeta(arg, 15);
      log_acc += static_cast<long double>(e) * std::log(z);
      zeta_calls += std::fabs(static_cast<long double>(e));
    }

    for (std::uint32_t p : primes_) log_acc += log_remainder_at(p, s);

    Complex value = std::exp(log_acc);
    long double tail = tail_bound(s.real());
    long double err = std::abs(value) * (zeta_calls * 1.0e-16L + tail * 2.0L);
    return {value, err};
  }

  // Tail of the remainder product past the prime cutoff, from the exact
  // leading remainder monomials: sum_{p>P} |c| p^(n - m sigma) bounded by
  // the integer tail integral.
  long double tail_bound(long double sigma) const {
    long double total = 0.0L;
    for (const auto& [n, m, c] : remainder_terms_) {
      long double alpha = n - m * sigma;
      if (alpha >= -1.0L) return 1.0L;  // callers treat >= O(1) as failure
      long double p = static_cast<long double>(prime_cutoff_);
      total += c * std::pow(p, alpha + 1.0L) / (-alpha - 1.0L);
    }
    return total;
  }

  void check_convergence(long double sigma) const {
    for (const auto& [n, m, c] : remainder_terms_) {
      (void)c;
      if (m > depth_ + 1) continue;
      if (n - m * sigma >= -1.0L - 1.0e-9L)
        throw validation_error(
            "convergence precondition violated: remainder order " +
            std::to_string(m) + " has degree " + std::to_string(n));
    }
  }

 private:
  // log of R(p, p^-s) = W(p, y) * prod (1 - p^n y^m)^e with y = p^-s.
  // One complex exponential per prime; every factor is assembled from
  // cached powers of y and p.
  Complex log_remainder_at(std::uint32_t p, const Complex& s) const {
    long double lp = std::log(static_cast<long double>(p));
    Complex y = std::exp(-s * lp);
    int max_m = std::max(depth_, w_.y_degree());
    Complex y_pow[64];  // y^m, m <= max_m (depths stay far below 64)
    y_pow[0] = 1.0L;
    for (int m = 1; m <= max_m; ++m) y_pow[m] = y_pow[m - 1] * y;
    long double p_pow[160];  // p^n as long double; exponents stay < 160
    p_pow[0] = 1.0L;
    for (int n = 1; n <= max_n_; ++n)
      p_pow[n] = p_pow[n - 1] * static_cast<long double>(p);

    Complex w_val = 0.0L;
    for (const auto& [mn, c] : w_.terms_by_m())
      w_val += w_coeff_ld_.at(mn) * p_pow[mn.second] * y_pow[mn.first];
    Complex lr = std::log(w_val);

    for (const auto& [mn, ed] : exponents_ld_) {
      auto [m, n] = mn;
      Complex x = p_pow[n] * y_pow[m];
      long double ax = std::abs(x);
      Complex l;
      if (ax < 1.0e-4L) {
        l = -x * (Complex(1.0L, 0.0L) + x * (0.5L + x / 3.0L));  // log(1-x), |x| tiny
      } else if (ax < 0.9999L) {
        l = std::log(Complex(1.0L, 0.0L) - x);
      } else {
        throw validation_error("remainder factor out of range at p=" + std::to_string(p));
      }
      lr += ed * l;
    }
    return lr;
  }

  BivariatePolynomial w_;
  int depth_;
  long prime_cutoff_;
  GhostExpansion expansion_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::tuple<int, int, long double>> remainder_terms_;  // (n, m, |c|)
  // Long-double mirrors for the per-prime inner loop.
  std::vector<std::pair<std::pair<int, int>, long double>> exponents_ld_;
  std::map<std::pair<int, int>, long double> w_coeff_ld_;
  int max_n_ = 0;
};

// One-shot evaluation; spec prefactors are not part of the product value
// (callers layer exact zeta values on top).
inline EulerProductValue euler_product_eval(const ProductSpec& spec, const Complex& s,
                                            int depth, long prime_cutoff,
                                            std::optional<long double> target = {}) {
  spec.validate();
  AcceleratedProduct prod(spec.w, depth, prime_cutoff);
  auto v = prod.eval(s);
  if (target && v.abs_error > *target)
    throw certification_error("requested accuracy unreachable at given depth/cutoff");
  return v;
}

}  // namespace eulerprod::dirichlet

#endif  // EULERPROD_DIRICHLET_HPP
