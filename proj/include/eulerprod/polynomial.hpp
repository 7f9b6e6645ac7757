// polynomial.hpp
//
// Exact bivariate polynomials W(u, Y) encoding local Euler factors: the
// monomial c*u^n*Y^m stands for c * p^n * p^(-ms) under u -> p, Y -> p^(-s).
// Every valid factor has constant term exactly 1 and no u-power free of Y
// (such a term would make the local factors unbounded in p).
//
// Also provides dense univariate polynomials over the rationals, the
// coefficient carrier of the truncated Y-series.

#ifndef EULERPROD_POLYNOMIAL_HPP
#define EULERPROD_POLYNOMIAL_HPP

#include <algorithm>
#include <cctype>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"

namespace eulerprod::poly {

using eulerprod::BigInt;
using eulerprod::BigRat;
using eulerprod::validation_error;

// ---------------------------------------------------------------------------
// Univariate polynomials over Q, dense representation without trailing zeros.
// ---------------------------------------------------------------------------
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(BigRat constant) {
    if (constant != 0) coeff_.push_back(std::move(constant));
  }
  static RatPoly monomial(int degree, BigRat c) {
    RatPoly p;
    if (c == 0) return p;
    p.coeff_.assign(degree + 1, BigRat(0));
    p.coeff_[degree] = std::move(c);
    return p;
  }

  bool is_zero() const { return coeff_.empty(); }
  int degree() const { return static_cast<int>(coeff_.size()) - 1; }  // -1 when zero
  const BigRat& operator[](int i) const {
    static const BigRat kZero(0);
    return (i >= 0 && i < static_cast<int>(coeff_.size())) ? coeff_[i] : kZero;
  }

  RatPoly& operator+=(const RatPoly& o) {
    if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), BigRat(0));
    for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
    trim();
    return *this;
  }
  RatPoly& operator-=(const RatPoly& o) {
    if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), BigRat(0));
    for (std::size_t i = 0; i < o.coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
    trim();
    return *this;
  }
  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }

  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    RatPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < a.coeff_.size(); ++i) {
      if (a.coeff_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeff_.size(); ++j)
        if (b.coeff_[j] != 0) r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
    }
    r.trim();
    return r;
  }

  RatPoly& scale(const BigRat& c) {
    if (c == 0) {
      coeff_.clear();
      return *this;
    }
    for (auto& x : coeff_) x *= c;
    return *this;
  }

  // u -> u^k substitution.
  RatPoly stretch(int k) const {
    RatPoly r;
    if (is_zero()) return r;
    r.coeff_.assign(static_cast<std::size_t>(degree()) * k + 1, BigRat(0));
    for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i * k] = coeff_[i];
    r.trim();
    return r;
  }

  bool operator==(const RatPoly& o) const { return coeff_ == o.coeff_; }

  // All coefficients integral (the Witt integrality check).
  bool is_integral() const {
    for (const auto& c : coeff_)
      if (denominator(c) != 1) return false;
    return true;
  }

 private:
  void trim() {
    while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
  }
  std::vector<BigRat> coeff_;
};

// ---------------------------------------------------------------------------
// Bivariate local-factor polynomials.
// ---------------------------------------------------------------------------
class BivariatePolynomial {
 public:
  // map key (m, n) -> coefficient; the (m, n) order is the canonical term
  // order used by the serializer.
  using TermMap = std::map<std::pair<int, int>, BigInt>;

  BivariatePolynomial() { terms_[{0, 0}] = 1; }

  // Validates the three invariants: constant term 1, m >= 1 off the constant,
  // no stored zeros. `terms` is keyed (n, m) to match the mathematical
  // reading e(n, m); the internal map is keyed (m, n).
  static BivariatePolynomial from_terms(const std::map<std::pair<int, int>, BigInt>& terms) {
    BivariatePolynomial w;
    w.terms_.clear();
    for (const auto& [nm, c] : terms) {
      if (c == 0) continue;
      auto [n, m] = nm;
      if (n < 0 || m < 0) throw validation_error("negative exponents");
      w.terms_[{m, n}] += c;
    }
    w.validate();
    return w;
  }

  const TermMap& terms_by_m() const { return terms_; }

  BigInt coefficient(int n, int m) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  bool is_one() const { return terms_.size() == 1; }

  int y_degree() const {
    int d = 0;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.first);
    return d;
  }
  int u_degree() const {
    int d = 0;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.second);
    return d;
  }
  // Largest u-degree among terms of given Y-degree, or -1 if none.
  int u_degree_at(int m) const {
    int d = -1;
    for (const auto& [mn, c] : terms_)
      if (mn.first == m) d = std::max(d, mn.second);
    return d;
  }

  // Y-coefficient as a polynomial in u.
  RatPoly y_coefficient(int m) const {
    RatPoly p;
    for (const auto& [mn, c] : terms_)
      if (mn.first == m) p += RatPoly::monomial(mn.second, BigRat(c));
    return p;
  }

  friend BivariatePolynomial operator*(const BivariatePolynomial& a,
                                       const BivariatePolynomial& b) {
    BivariatePolynomial r;
    r.terms_.clear();
    for (const auto& [mn1, c1] : a.terms_)
      for (const auto& [mn2, c2] : b.terms_) {
        auto& slot = r.terms_[{mn1.first + mn2.first, mn1.second + mn2.second}];
        slot += c1 * c2;
      }
    std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
    r.validate();
    return r;
  }

  bool operator==(const BivariatePolynomial& o) const { return terms_ == o.terms_; }

  // Numeric evaluation at (u, y).
  std::complex<long double> eval(std::complex<long double> u,
                                 std::complex<long double> y) const {
    std::complex<long double> acc = 0.0L;
    for (const auto& [mn, c] : terms_) {
      std::complex<long double> t = static_cast<long double>(c);
      for (int i = 0; i < mn.second; ++i) t *= u;
      for (int i = 0; i < mn.first; ++i) t *= y;
      acc += t;
    }
    return acc;
  }

  // Canonical text form, terms in (m, n) lexicographic order.
  std::string str() const {
    std::string out;
    bool first = true;
    for (const auto& [mn, c] : terms_) {
      auto [m, n] = mn;
      BigInt a = c;
      bool neg = a < 0;
      if (neg) a = -a;
      if (first) {
        if (neg) out += "-";
        first = false;
      } else {
        out += neg ? " - " : " + ";
      }
      std::vector<std::string> factors;
      if (a != 1 || (n == 0 && m == 0)) factors.push_back(a.str());
      if (n == 1) factors.push_back("p");
      if (n > 1) factors.push_back("p^" + std::to_string(n));
      if (m == 1) factors.push_back("T");
      if (m > 1) factors.push_back("T^" + std::to_string(m));
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i];
      }
    }
    return out.empty() ? "1" : out;
  }

 private:
  void validate() const {
    auto it = terms_.find({0, 0});
    if (it == terms_.end() || it->second != 1)
      throw validation_error("constant term must be exactly 1");
    for (const auto& [mn, c] : terms_) {
      if (c == 0) throw validation_error("stored zero coefficient");
      if (mn.first == 0 && mn.second != 0)
        throw validation_error("term with a p-power but no T-power (m=0, n>0)");
    }
  }

  TermMap terms_;  // key (m, n)
};

// ---------------------------------------------------------------------------
// Parser for the local-factor grammar:
//   expr  := term (('+'|'-') term)*
//   term  := coeff ('*'? atom)* | atom ('*'? atom)*
//   atom  := ('p'|'T') ('^' uint)?
//   coeff := uint
// Whitespace is insignificant; term order does not matter.
// ---------------------------------------------------------------------------
namespace detail {

class PolyParser {
 public:
  explicit PolyParser(const std::string& text) : s_(text) {}

  BivariatePolynomial parse() {
    std::map<std::pair<int, int>, BigInt> acc;  // key (n, m)
    skip_ws();
    if (eof()) fail("empty expression");
    bool negative = false;
    parse_term(acc, negative);
    while (true) {
      skip_ws();
      if (eof()) break;
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        negative = (c == '-');
        parse_term(acc, negative);
      } else {
        fail("expected '+' or '-'");
      }
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
    if (!acc.count({0, 0}) || acc[{0, 0}] != 1)
      throw validation_error("constant term must be exactly 1");
    for (const auto& [nm, c] : acc)
      if (nm.second == 0 && nm.first != 0)
        throw validation_error("term with a p-power but no T-power (m=0, n>0)");
    return BivariatePolynomial::from_terms(acc);
  }

 private:
  void parse_term(std::map<std::pair<int, int>, BigInt>& acc, bool negative) {
    skip_ws();
    if (eof()) fail("expected a term");
    BigInt coeff = 1;
    int n = 0, m = 0;
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = parse_uint_big();
      any = true;
    }
    while (true) {
      skip_ws();
      std::size_t mark = pos_;
      bool star = false;
      if (any && !eof() && peek() == '*') {
        ++pos_;
        skip_ws();
        star = true;
      }
      if (!eof() && (peek() == 'p' || peek() == 'T')) {
        char v = peek();
        ++pos_;
        int e = 1;
        skip_ws();
        if (!eof() && peek() == '^') {
          ++pos_;
          skip_ws();
          if (!eof() && peek() == '-') fail("negative exponents are not allowed");
          e = parse_uint_small();
        }
        if (v == 'p')
          n += e;
        else
          m += e;
        any = true;
      } else {
        if (star) fail("expected 'p' or 'T' after '*'");
        pos_ = mark;
        break;
      }
    }
    if (!any) fail("expected a coefficient or a variable");
    acc[{n, m}] += negative ? -coeff : coeff;
  }

  BigInt parse_uint_big() {
    std::string digits;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += s_[pos_++];
    if (digits.empty()) fail("expected an unsigned integer");
    return BigInt(digits);
  }

  int parse_uint_small() {
    BigInt v = parse_uint_big();
    if (v > 1000000) fail("exponent too large");
    return static_cast<int>(v);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw validation_error("syntax error at position " + std::to_string(pos_ + 1) +
                           ": " + why);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline BivariatePolynomial parse_polynomial(const std::string& text) {
  return detail::PolyParser(text).parse();
}

}  // namespace eulerprod::poly

#endif  // EULERPROD_POLYNOMIAL_HPP
