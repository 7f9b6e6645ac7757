// zeta.hpp
//
// Floating-point engine for zeta(s), zeta'(s), Gamma(s) and Hardy's
// Z-function in 80-bit long double arithmetic (~18-19 significant digits,
// which leaves headroom over the 13-digit targets).
//
// zeta uses Euler-Maclaurin uniformly:
//
//   zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//           + sum_k B_{2k}/(2k)! * (s)(s+1)...(s+2k-2) * N^(1-s-2k) + R_K
//
// with N scaled by |Im s| so the Bernoulli tail decays; the derivative is
// obtained by differentiating the same formula term-wise, not by finite
// differences. Supported range |Im s| <= 10^4.
//
// Gamma uses the Stirling series after shifting Re s up, with the reflection
// formula for the left half-plane. The log-gamma branch is the canonical
// one (continuous, real on the positive axis), which makes the Riemann-
// Siegel theta function continuous in t.

#ifndef EULERPROD_ZETA_HPP
#define EULERPROD_ZETA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/util.hpp"

namespace eulerprod::zetanum {

using Complex = std::complex<long double>;

inline constexpr long double kPi = std::numbers::pi_v<long double>;

namespace detail {

// B_{2k}/(2k)! for k = 1..kMaxBernoulli, computed once from the exact
// recurrence sum_{j<=m} binom(m+1, j) B_j = 0.
inline constexpr int kMaxBernoulli = 24;

inline const std::array<long double, kMaxBernoulli + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<long double, kMaxBernoulli + 1> t{};
    int top = 2 * kMaxBernoulli;
    std::vector<BigRat> b(top + 1);
    b[0] = 1;
    for (int m = 1; m <= top; ++m) {
      BigRat acc = 0;
      for (int j = 0; j < m; ++j) acc += BigRat(binomial(m + 1, j)) * b[j];
      b[m] = -acc / (m + 1);
    }
    BigInt fact = 1;
    for (int k = 1; k <= kMaxBernoulli; ++k) {
      fact *= (2 * k - 1);
      fact *= (2 * k);
      t[k] = static_cast<long double>(b[2 * k] / BigRat(fact));
    }
    return t;
  }();
  return table;
}

// B_{2k}/((2k)(2k-1)) for the Stirling series.
inline const std::array<long double, kMaxBernoulli + 1>& bernoulli_stirling() {
  static const auto table = [] {
    std::array<long double, kMaxBernoulli + 1> t{};
    int top = 2 * kMaxBernoulli;
    std::vector<BigRat> b(top + 1);
    b[0] = 1;
    for (int m = 1; m <= top; ++m) {
      BigRat acc = 0;
      for (int j = 0; j < m; ++j) acc += BigRat(binomial(m + 1, j)) * b[j];
      b[m] = -acc / (m + 1);
    }
    for (int k = 1; k <= kMaxBernoulli; ++k)
      t[k] = static_cast<long double>(b[2 * k] / BigRat(2 * k * (2 * k - 1)));
    return t;
  }();
  return table;
}

inline Complex pow_real_base(long double base, const Complex& expo) {
  // base^expo for base > 0.
  long double lb = std::log(base);
  long double re = expo.real() * lb;
  long double im = expo.imag() * lb;
  long double mag = std::exp(re);
  return {mag * std::cos(im), mag * std::sin(im)};
}

// log n for n < 32768, built once; the Euler-Maclaurin cutoffs stay well
// inside this range for |Im s| <= 1e4.
inline long double log_int(long n) {
  static const std::vector<long double>& table = *[] {
    auto* t = new std::vector<long double>(32768);
    for (std::size_t i = 1; i < t->size(); ++i)
      (*t)[i] = std::log(static_cast<long double>(i));
    return t;
  }();
  return (n > 0 && n < static_cast<long>(table.size()))
             ? table[n]
             : std::log(static_cast<long double>(n));
}

struct ZetaPair {
  Complex value;
  Complex derivative;
  long double err = 0.0L;
};

inline ZetaPair zeta_em_pair(const Complex& s, int prec) {
  long double t = std::fabs(s.imag());
  if (t > 1.0e4L) throw validation_error("zeta: |Im s| beyond supported range 1e4");
  if (s == Complex(1.0L, 0.0L)) throw validation_error("zeta: pole at s=1");
  if (prec > 15) prec = 15;

  const auto& bf = bernoulli_over_factorial();
  long double target = std::pow(10.0L, -static_cast<long double>(prec + 2));

  int n_base = static_cast<int>(0.4L * t) + 8 * prec / 10 + 24;
  ZetaPair out;
  for (int attempt = 0; attempt < 4; ++attempt, n_base *= 2) {
    int n_cut = n_base;
    CompensatedSum re_sum, im_sum, re_dsum, im_dsum;
    for (int n = 1; n < n_cut; ++n) {
      long double ln = log_int(n);
      long double mag = std::exp(-s.real() * ln);
      long double ph = -s.imag() * ln;
      long double c, si;
      __builtin_sincosl(ph, &si, &c);
      re_sum.add(mag * c);
      im_sum.add(mag * si);
      re_dsum.add(-ln * mag * c);
      im_dsum.add(-ln * mag * si);
    }
    Complex val(re_sum.value(), im_sum.value());
    Complex dval(re_dsum.value(), im_dsum.value());

    long double big_n = n_cut;
    long double ln_n = std::log(big_n);
    Complex sm1 = s - Complex(1.0L, 0.0L);
    Complex n_pow_1ms = pow_real_base(big_n, Complex(1.0L, 0.0L) - s);  // N^(1-s)
    Complex n_pow_ms = n_pow_1ms / big_n;                               // N^(-s)

    val += n_pow_1ms / sm1;
    dval += -ln_n * n_pow_1ms / sm1 - n_pow_1ms / (sm1 * sm1);
    val += 0.5L * n_pow_ms;
    dval += -0.5L * ln_n * n_pow_ms;

    // Bernoulli correction terms. poch = (s)(s+1)...(s+2k-2),
    // poch_dlog = sum 1/(s+j) handled via explicit product/sum so a single
    // vanishing factor (s = -j) still differentiates correctly.
    Complex npow = n_pow_ms / big_n;  // N^(-s-1)
    long double err_last = 0.0L;
    long double scale = std::abs(val);
    if (scale < 1.0L) scale = 1.0L;
    bool converged = false;
    Complex poch = s;
    Complex poch_d = 1.0L;  // d/ds of poch
    long double prev_tm = 0.0L;
    for (int k = 1; k <= kMaxBernoulli; ++k) {
      if (k > 1) {
        Complex f1 = s + Complex(2.0L * k - 3.0L, 0.0L);
        Complex f2 = s + Complex(2.0L * k - 2.0L, 0.0L);
        poch_d = poch_d * f1 * f2 + poch * (f1 + f2);
        poch = poch * f1 * f2;
      }
      Complex term = bf[k] * poch * npow;
      Complex dterm = bf[k] * (poch_d - poch * ln_n) * npow;
      long double tm = std::max(std::abs(term), std::abs(dterm) / (1.0L + ln_n));
      if (k > 1 && tm > prev_tm) break;  // asymptotic tail turned; stop before it
      val += term;
      dval += dterm;
      err_last = tm;
      prev_tm = tm;
      if (tm < target * scale) {
        converged = true;
        break;
      }
      npow /= big_n * big_n;  // N^(-s-2k-1) for next k
    }
    if (converged || err_last < target * scale * 10.0L) {
      out.value = val;
      out.derivative = dval;
      out.err = err_last + scale * 1.0e-17L * n_cut;
      return out;
    }
  }
  throw certification_error("zeta: Euler-Maclaurin failed to reach requested accuracy");
}

// Canonical log-gamma for Re z > 0 via Stirling after shifting |z| >= 16.
inline Complex log_gamma_right(Complex z) {
  const auto& bs = bernoulli_stirling();
  Complex shift = 0.0L;
  while (std::abs(z) < 16.0L) {
    shift -= std::log(z);
    z += 1.0L;
  }
  Complex inv = 1.0L / z;
  Complex inv2 = inv * inv;
  Complex series = 0.0L;
  Complex p = inv;
  for (int k = 1; k <= 14; ++k) {
    series += bs[k] * p;
    p *= inv2;
  }
  Complex half_log_2pi(0.91893853320467274178032973640562L, 0.0L);
  return (z - Complex(0.5L, 0.0L)) * std::log(z) - z + half_log_2pi + series + shift;
}

}  // namespace detail

inline Complex zeta(const Complex& s, int prec = 13) {
  return detail::zeta_em_pair(s, prec).value;
}

inline Complex zeta_derivative(const Complex& s, int prec = 9) {
  return detail::zeta_em_pair(s, prec).derivative;
}

inline long double zeta_real(long double x, int prec = 13) {
  return zeta(Complex(x, 0.0L), prec).real();
}

inline Complex log_gamma(const Complex& s) {
  if (s.real() > 0.0L) return detail::log_gamma_right(s);
  throw validation_error("log_gamma requires Re s > 0");
}

inline Complex gamma(const Complex& s, int prec = 12) {
  (void)prec;  // the Stirling tail is far below 10^-12 over the whole range
  if (s.imag() == 0.0L && s.real() <= 0.0L && s.real() == std::floor(s.real()))
    throw validation_error("gamma: pole at nonpositive integer");
  if (s.real() >= 0.5L) return std::exp(detail::log_gamma_right(s));
  // Reflection: Gamma(s) = pi / (sin(pi s) * Gamma(1-s)).
  Complex sinpis = std::sin(kPi * s);
  return kPi / (sinpis * std::exp(detail::log_gamma_right(Complex(1.0L, 0.0L) - s)));
}

// Riemann-Siegel theta: theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.
inline long double riemann_siegel_theta(long double t) {
  Complex lg = detail::log_gamma_right(Complex(0.25L, t / 2.0L));
  return lg.imag() - (t / 2.0L) * std::log(kPi);
}

// Hardy Z(t) = exp(i theta(t)) zeta(1/2 + it); real for real t, so the
// imaginary part doubles as a numeric sanity residual.
struct HardyZ {
  long double value;
  long double imag_residual;
};

inline HardyZ hardy_z_full(long double t, int prec = 13) {
  if (t <= 0.0L) throw validation_error("hardy_z defined for t > 0");
  long double th = riemann_siegel_theta(t);
  Complex rot(std::cos(th), std::sin(th));
  Complex z = rot * zeta(Complex(0.5L, t), prec);
  return {z.real(), std::fabs(z.imag())};
}

inline long double hardy_z(long double t, int prec = 13) {
  return hardy_z_full(t, prec).value;
}

}  // namespace eulerprod::zetanum

#endif  // EULERPROD_ZETA_HPP
