// series.hpp
//
// Truncated formal power series in Y with coefficients in Q[u]. All
// arithmetic is exact; nothing here ever touches floating point. The series
// carry the formal logarithm of a local-factor polynomial and the
// independent reconstruction of a zeta-factor product.

#ifndef EULERPROD_SERIES_HPP
#define EULERPROD_SERIES_HPP

#include <map>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/polynomial.hpp"

namespace eulerprod::poly {

class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : coeff_(order + 1) {
    if (order < 0) throw validation_error("series order must be nonnegative");
  }

  static TruncatedSeries one(int order) {
    TruncatedSeries s(order);
    s.coeff_[0] = RatPoly(BigRat(1));
    return s;
  }

  static TruncatedSeries from_polynomial(const BivariatePolynomial& w, int order) {
    TruncatedSeries s(order);
    for (const auto& [mn, c] : w.terms_by_m()) {
      if (mn.first > order) continue;
      s.coeff_[mn.first] += RatPoly::monomial(mn.second, BigRat(c));
    }
    return s;
  }

  int order() const { return static_cast<int>(coeff_.size()) - 1; }
  const RatPoly& coefficient(int m) const { return coeff_.at(m); }
  RatPoly& coefficient(int m) { return coeff_.at(m); }

  bool operator==(const TruncatedSeries& o) const { return coeff_ == o.coeff_; }

  // Truncated product.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    int order = std::min(a.order(), b.order());
    TruncatedSeries r(order);
    for (int i = 0; i <= order; ++i) {
      if (a.coeff_[i].is_zero()) continue;
      for (int j = 0; i + j <= order; ++j) {
        if (b.coeff_[j].is_zero()) continue;
        r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
      }
    }
    return r;
  }

  // Multiplies in place by (1 - u^n Y^m)^(-e), expanded as a binomial series.
  TruncatedSeries& mul_geometric_power(int n, int m, const BigInt& e) {
    if (e == 0 || m <= 0) return *this;
    int order = this->order();
    int jmax = order / m;
    std::vector<RatPoly> factor(order + 1);
    factor[0] = RatPoly(BigRat(1));
    for (int j = 1; j <= jmax; ++j) {
      BigInt c = (e > 0) ? binomial(e + j - 1, j)            // (1-x)^(-e), e>0
                         : ((j % 2) ? -binomial(-e, j) : binomial(-e, j));
      if (c == 0) continue;
      factor[j * m] = RatPoly::monomial(n * j, BigRat(c));
    }
    TruncatedSeries f(order);
    f.coeff_ = std::move(factor);
    *this = *this * f;
    return *this;
  }

 private:
  std::vector<RatPoly> coeff_;  // coeff_[m] multiplies Y^m
};

// Formal logarithm of W with W(0,0) = 1, truncated at Y^M. The recurrence
// m*b_m = m*p_m - sum_{j<m} j*b_j*p_{m-j} follows from W * (log W)' = W'.
inline TruncatedSeries series_log(const BivariatePolynomial& w, int order) {
  if (order < 1) throw validation_error("series_log needs order >= 1");
  TruncatedSeries p = TruncatedSeries::from_polynomial(w, order);
  TruncatedSeries b(order);
  for (int m = 1; m <= order; ++m) {
    RatPoly acc = p.coefficient(m);
    acc.scale(BigRat(m));
    for (int j = 1; j < m; ++j) {
      RatPoly t = b.coefficient(j) * p.coefficient(m - j);
      t.scale(BigRat(j));
      acc -= t;
    }
    acc.scale(BigRat(1, m));
    b.coefficient(m) = acc;
  }
  return b;
}

// Formal exponential of a series with zero constant term:
// m*e_m = sum_{j=1..m} j*s_j*e_{m-j}.
inline TruncatedSeries series_exp(const TruncatedSeries& s) {
  if (!s.coefficient(0).is_zero())
    throw validation_error("series_exp needs zero constant term");
  int order = s.order();
  TruncatedSeries e = TruncatedSeries::one(order);
  for (int m = 1; m <= order; ++m) {
    RatPoly acc;
    for (int j = 1; j <= m; ++j) {
      RatPoly t = s.coefficient(j) * e.coefficient(m - j);
      t.scale(BigRat(j));
      acc += t;
    }
    acc.scale(BigRat(1, m));
    e.coefficient(m) = acc;
  }
  return e;
}

// Multiplies out prod (1 - u^n Y^m)^(-e(n,m)) mod Y^(order+1). Exponents are
// keyed (m, n). This is the independent oracle against which the Witt
// inversion is verified, so it deliberately shares no code with it.
inline TruncatedSeries product_reconstruct(
    const std::map<std::pair<int, int>, BigInt>& exponents_by_m, int order) {
  TruncatedSeries r = TruncatedSeries::one(order);
  for (const auto& [mn, e] : exponents_by_m) {
    if (mn.first > order) continue;
    r.mul_geometric_power(mn.second, mn.first, e);
  }
  return r;
}

}  // namespace eulerprod::poly

#endif  // EULERPROD_SERIES_HPP
