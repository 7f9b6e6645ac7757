// explicit_formula.hpp
//
// Smoothed counting pipeline for a product spec whose Dirichlet series in
// w = s/scale has isolated poles right of the candidate boundary plus poles
// at zeta zeros through reciprocal factors:
//
//   A(x) = sum_n a_n e^(-n/x)
//        = sum_poles Gamma(w0) Res_w x^(w0) + sum_rho alpha_rho x^(w_rho) + ...
//
// Residues are computed and reported in the s-variable; the 1/scale Jacobian
// of the substitution w = s/scale is applied separately and explicitly
// (convention A omits it, convention B applies it), and the empirical
// main-term dominance fit selects the operative convention, never fiat.

#ifndef EULERPROD_EXPLICIT_FORMULA_HPP
#define EULERPROD_EXPLICIT_FORMULA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/dirichlet.hpp"
#include "eulerprod/ghost.hpp"
#include "eulerprod/util.hpp"
#include "eulerprod/zeros.hpp"
#include "eulerprod/zeta.hpp"

namespace eulerprod::explicit_formula {

using eulerprod::dirichlet::AcceleratedProduct;
using eulerprod::dirichlet::CoefficientArray;
using eulerprod::dirichlet::ProductSpec;
using eulerprod::zetanum::Complex;
using eulerprod::zetanum::ZeroTable;

// Coefficient coverage needed so the dropped e^(-n/x) tail is below
// 10^-12 * A(x).
inline long smoothed_sum_cutoff(double x) {
  return static_cast<long>(std::ceil(x * (3.0 * std::log(x) + 40.0)));
}

inline long double smoothed_sum(const CoefficientArray& coeffs, double x) {
  if (!(x > 0.0)) throw validation_error("smoothed_sum needs x > 0");
  if (coeffs.n_bound < smoothed_sum_cutoff(x))
    throw validation_error("coefficient array too short for requested x");
  CompensatedSum acc;
  long double lx = static_cast<long double>(x);
  for (long n = 1; n <= coeffs.n_bound; ++n) {
    const BigInt& a = coeffs.at(n);
    if (a == 0) continue;
    acc.add(static_cast<long double>(a) * std::exp(-static_cast<long double>(n) / lx));
  }
  return acc.value();
}

struct PoleTerm {
  BigRat location_s;       // simple pole in the s-variable
  long double residue_s;   // residue there (real)
  long double abs_error;
  long double exponent_w;  // location_s / scale: the x-power it feeds
  long double constant_a;  // Gamma(w0) * residue_s           (convention A)
  long double constant_b;  // Gamma(w0) * residue_s / scale   (convention B)
};

struct ZeroTermCoefficient {
  long double gamma;   // zero ordinate, rho = 1/2 + i gamma
  Complex w_exponent;  // (rho + n) / (m * scale)
  Complex alpha;       // coefficient of x^w_exponent (conjugate pair implied)
};

class Engine {
 public:
  Engine(ProductSpec spec, const ZeroTable* zeros, int depth = 8,
         long prime_cutoff = 100000)
      : spec_(std::move(spec)),
        zeros_(zeros),
        prod_(spec_.w, depth, prime_cutoff) {
    spec_.validate();
    // Conservative finite-depth threshold for "strictly right of the
    // candidate boundary": the global sup of n/m dominates the tail proxy,
    // so no pole at or below the accumulation line ever classifies as an
    // isolated main term.
    auto boundary = eulerprod::ghost::candidate_boundary(prod_.expansion());
    if (boundary.global_sup)
      boundary_s_ = *boundary.global_sup;
    else
      boundary_s_ = BigRat(0);
  }

  const ProductSpec& spec() const { return spec_; }
  const AcceleratedProduct& product() const { return prod_; }
  const BigRat& boundary_s() const { return boundary_s_; }

  // Simple poles of the full product (prefactors + expansion rows with
  // positive exponent) strictly right of the candidate boundary, descending.
  std::vector<BigRat> pole_locations() const {
    std::set<BigRat> locs;
    for (const auto& f : spec_.prefactors)
      if (f.c > 0) {
        BigRat s0(1 + f.b, f.a);
        if (s0 > boundary_s_) locs.insert(s0);
      }
    for (const auto& [mn, e] : prod_.expansion().exponents)
      if (e > 0) {
        BigRat s0(1 + mn.second, mn.first);
        if (s0 > boundary_s_) locs.insert(s0);
      }
    return {locs.rbegin(), locs.rend()};
  }

  // Residue in the s-variable at a simple pole of exactly one retained
  // factor.
  PoleTerm residue_at_pole(const BigRat& s0) const {
    int driver_a = 0;
    int drivers = 0;
    std::set<std::pair<int, int>> skip;
    BigInt driver_mult = 0;
    for (const auto& f : spec_.prefactors) {
      if (BigRat(f.a) * s0 - f.b == 1) {
        ++drivers;
        driver_a = f.a;
        driver_mult = f.c;
      }
    }
    for (const auto& [mn, e] : prod_.expansion().exponents) {
      if (BigRat(mn.first) * s0 - mn.second == 1) {
        ++drivers;
        driver_a = mn.first;
        driver_mult = e;
        skip.insert(mn);
      }
    }
    if (drivers != 1 || driver_mult != 1)
      throw validation_error("not a simple pole of exactly one retained factor");

    long double s0d = static_cast<long double>(s0);
    Complex s(s0d, 0.0L);
    long double value = 1.0L / driver_a;
    for (const auto& f : spec_.prefactors) {
      if (BigRat(f.a) * s0 - f.b == 1) continue;
      long double arg = static_cast<long double>(BigRat(f.a) * s0 - f.b);
      value *= std::pow(eulerprod::zetanum::zeta_real(arg, 15),
                        static_cast<long double>(f.c));
    }
    auto pv = prod_.eval(s, skip);
    value *= pv.value.real();
    long double rel_err = (std::abs(pv.value.real()) > 0)
                              ? pv.abs_error / std::abs(pv.value.real())
                              : pv.abs_error;

    PoleTerm term;
    term.location_s = s0;
    term.residue_s = value;
    term.abs_error = std::fabs(value) * (rel_err + 1.0e-13L);
    term.exponent_w = s0d / spec_.variable_scale;
    Complex g = eulerprod::zetanum::gamma(Complex(term.exponent_w, 0.0L));
    term.constant_a = g.real() * value;
    term.constant_b = term.constant_a / spec_.variable_scale;
    return term;
  }

  std::vector<PoleTerm> main_terms() const {
    std::vector<PoleTerm> out;
    for (const auto& s0 : pole_locations()) out.push_back(residue_at_pole(s0));
    return out;
  }

  // Reciprocal rows whose zeta-zero line lies right of the boundary: each
  // zero rho of zeta(ms - n) contributes a pole of the product at
  // s = (rho + n)/m.
  std::vector<std::pair<int, int>> zero_rows() const {
    std::vector<std::pair<int, int>> rows;  // (m, n)
    for (const auto& [mn, e] : prod_.expansion().exponents) {
      if (e >= 0) continue;
      if (BigRat(1, 2) + mn.second > boundary_s_ * mn.first) {
        if (e != -1)
          throw validation_error("reciprocal factor of multiplicity > 1 unsupported");
        rows.push_back(mn);
      }
    }
    return rows;
  }

  // alpha_rho for the k-th table zero through the given reciprocal row.
  ZeroTermCoefficient zero_term_coefficient(std::pair<int, int> row,
                                            std::size_t zero_index) const {
    if (!zeros_ || zero_index >= zeros_->ordinates.size())
      throw validation_error("zero index beyond table coverage");
    auto [m, n] = row;
    int scale = spec_.variable_scale;
    long double g = zeros_->ordinates[zero_index];
    Complex rho(0.5L, g);
    Complex dz = eulerprod::zetanum::zeta_derivative(rho, 13);
    if (std::abs(dz) < 1.0e-6L)
      throw certification_error("|zeta'(rho)| below tolerance; possible multiple zero");

    Complex s = (rho + Complex(static_cast<long double>(n), 0.0L)) /
                static_cast<long double>(m);
    Complex w = s / static_cast<long double>(scale);
    Complex h = prod_.eval(s, {{m, n}}).value;
    for (const auto& f : spec_.prefactors) {
      Complex arg = static_cast<long double>(f.a) * s -
                    Complex(static_cast<long double>(f.b), 0.0L);
      Complex z = eulerprod::zetanum::zeta(arg, 15);
      h *= std::exp(static_cast<long double>(f.c) * std::log(z));
    }
    ZeroTermCoefficient out;
    out.gamma = g;
    out.w_exponent = w;
    out.alpha = eulerprod::zetanum::gamma(w) * h /
                (static_cast<long double>(m) * scale * dz);
    return out;
  }

  // First K zero-term coefficients for every qualifying reciprocal row.
  // Coefficients are independent, so they may be evaluated in parallel;
  // each slot is written by index, keeping the result identical for any
  // worker count.
  std::vector<ZeroTermCoefficient> zero_terms(std::size_t count,
                                              unsigned jobs = 1) const {
    auto rows = zero_rows();
    std::vector<ZeroTermCoefficient> out(rows.size() * count);
    eulerprod::run_blocks(out.size(), jobs, [&](std::size_t i) {
      out[i] = zero_term_coefficient(rows[i / count], i % count);
    });
    return out;
  }

 private:
  ProductSpec spec_;
  const ZeroTable* zeros_;
  AcceleratedProduct prod_;
  BigRat boundary_s_;
};

// ---------------------------------------------------------------------------
// Evaluation grid, convention fit and error-exponent diagnostics.
// ---------------------------------------------------------------------------
enum class Convention { a, b };

struct GridPoint {
  double x = 0.0;
  long double a_direct = 0.0L;
  long double main = 0.0L;
  long double oscillatory = 0.0L;
  long double residual = 0.0L;
};

inline long double main_term_value(const std::vector<PoleTerm>& poles, double x,
                                   Convention conv) {
  long double acc = 0.0L;
  for (const auto& p : poles)
    acc += (conv == Convention::a ? p.constant_a : p.constant_b) *
           std::pow(static_cast<long double>(x), p.exponent_w);
  return acc;
}

// Conjugate pairs combined: each stored alpha contributes 2 Re(alpha x^w).
inline long double oscillatory_value(const std::vector<ZeroTermCoefficient>& terms,
                                     double x, Convention conv, int scale) {
  long double lx = std::log(static_cast<long double>(x));
  long double jac = (conv == Convention::b) ? 1.0L : static_cast<long double>(scale);
  CompensatedSum acc;
  for (const auto& t : terms)
    acc.add(2.0L * (t.alpha * std::exp(t.w_exponent * lx)).real() * jac);
  return acc.value();
}

inline GridPoint evaluate_point(const std::vector<PoleTerm>& poles,
                                const std::vector<ZeroTermCoefficient>& terms,
                                const CoefficientArray& coeffs, double x,
                                Convention conv, int scale) {
  GridPoint g;
  g.x = x;
  g.a_direct = smoothed_sum(coeffs, x);
  g.main = main_term_value(poles, x, conv);
  g.oscillatory = oscillatory_value(terms, x, conv, scale);
  g.residual = g.a_direct - g.main - g.oscillatory;
  return g;
}

struct ConventionFit {
  Convention winner = Convention::b;
  long double fitted_ratio = 0.0L;     // A_direct(x_top) / x_top^(w_max)
  long double cauchy_gap = 0.0L;       // relative step between top two x
  long double winner_discrepancy = 0.0L;
  long double loser_factor = 0.0L;     // >= 2 rejects the loser
};

// Dominance fit on the two largest grid points: the leading constant is
// A_direct / x^(w_max) up to lower-order terms.
inline ConventionFit select_convention(const std::vector<PoleTerm>& poles,
                                       const CoefficientArray& coeffs,
                                       const std::vector<double>& xs) {
  if (poles.empty()) throw validation_error("no poles; nothing to fit");
  if (xs.size() < 2) throw validation_error("need at least two grid points");
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  double x1 = sorted[sorted.size() - 2], x2 = sorted.back();
  long double w = poles.front().exponent_w;
  long double r1 = smoothed_sum(coeffs, x1) / std::pow(static_cast<long double>(x1), w);
  long double r2 = smoothed_sum(coeffs, x2) / std::pow(static_cast<long double>(x2), w);

  ConventionFit fit;
  fit.fitted_ratio = r2;
  fit.cauchy_gap = std::fabs(r1 - r2) / std::fabs(r2);
  long double ca = poles.front().constant_a;
  long double cb = poles.front().constant_b;
  long double da = std::fabs(r2 - ca), db = std::fabs(r2 - cb);
  fit.winner = (da < db) ? Convention::a : Convention::b;
  long double cw = (fit.winner == Convention::a) ? ca : cb;
  long double cl = (fit.winner == Convention::a) ? cb : ca;
  fit.winner_discrepancy = std::fabs(r2 / cw - 1.0L);
  fit.loser_factor = std::max(std::fabs(cl / r2), std::fabs(r2 / cl));
  return fit;
}

struct ExponentFit {
  long double slope = 0.0L;
  long double intercept = 0.0L;
  bool floored = false;  // residuals below evaluation precision
  std::string verdict;
};

inline ExponentFit error_exponent_fit(const std::vector<GridPoint>& grid) {
  if (grid.size() < 5) throw validation_error("exponent fit needs >= 5 grid points");
  double x_min = grid.front().x, x_max = grid.front().x;
  for (const auto& g : grid) {
    x_min = std::min(x_min, g.x);
    x_max = std::max(x_max, g.x);
  }
  if (x_max < 100.0 * x_min)
    throw validation_error("exponent fit needs >= 2 decades of x");

  std::vector<std::pair<long double, long double>> pts;
  for (const auto& g : grid) {
    long double floor_level = 1.0e-15L * std::fabs(g.a_direct);
    if (std::fabs(g.residual) <= floor_level) continue;
    pts.emplace_back(std::log(static_cast<long double>(g.x)),
                     std::log(std::fabs(g.residual)));
  }
  ExponentFit fit;
  if (pts.size() < 3) {
    fit.floored = true;
    fit.verdict = "error dominated by evaluation precision";
    return fit;
  }
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  long double n = static_cast<long double>(pts.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  auto near = [&](long double target, long double tol) {
    return std::fabs(fit.slope - target) < tol;
  };
  if (near(4.0L / 3.0L, 0.08L))
    fit.verdict = "slope consistent with x^(4/3)";
  else if (near(17.0L / 12.0L, 0.05L))
    fit.verdict = "slope consistent with x^(17/12)";
  else if (near(1.5L, 0.05L))
    fit.verdict = "slope consistent with x^(3/2)";
  else if (fit.slope > 1.9L)
    fit.verdict = "slope near the next main-term exponent; convention rejected";
  else
    fit.verdict = "slope between the oscillation and error exponents";
  return fit;
}

}  // namespace eulerprod::explicit_formula

#endif  // EULERPROD_EXPLICIT_FORMULA_HPP
