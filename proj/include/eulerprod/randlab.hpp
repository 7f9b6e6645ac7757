// randlab.hpp
//
// Finite simulations of random zeta products
//
//     Z(s) = prod_{nu <= V} zeta(a_nu s + b_nu)^(c_nu + eps_nu)
//
// with independent perturbations eps_nu. Divisors of the truncated product
// are mapped into boxes along the presumed boundary sigma_h = limsup -b/a:
// every table zero 1/2 + i gamma of a factor lands at ((1/2+i gamma)-b)/a,
// the factor pole at (1-b)/a, each carrying weight c_nu + eps_nu.
//
// Weights are exact rationals (uniform perturbations are sampled as 53-bit
// dyadics), so coincidence merging and weight conservation are exact; merges
// only happen on exact parameter equality, never on floating proximity,
// which instead gets flagged as a near miss.

#ifndef EULERPROD_RANDLAB_HPP
#define EULERPROD_RANDLAB_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/zeros.hpp"

namespace eulerprod::randlab {

using eulerprod::zetanum::ZeroTable;

// (mul * nu + add) / (den_mul * nu + den_add); affine when the denominator
// is the constant 1.
struct CoefficientTemplate {
  BigRat mul = 0, add = 0;
  BigRat den_mul = 0, den_add = 1;

  BigRat eval(long nu) const {
    BigRat den = den_mul * nu + den_add;
    if (den == 0) throw validation_error("coefficient template denominator vanishes");
    return (mul * nu + add) / den;
  }
  static CoefficientTemplate affine(BigRat m, BigRat a) {
    return {std::move(m), std::move(a), BigRat(0), BigRat(1)};
  }
};

struct PerturbationLaw {
  enum class Kind { discrete, uniform };
  Kind kind = Kind::discrete;
  std::vector<std::pair<BigRat, BigRat>> atoms;  // (value, probability)
  BigRat lo = 0, hi = 0;                         // uniform support

  void validate() const {
    if (kind == Kind::discrete) {
      if (atoms.empty()) throw validation_error("discrete law needs atoms");
      BigRat total = 0, biggest = 0;
      for (const auto& [v, p] : atoms) {
        (void)v;
        if (p <= 0) throw validation_error("atom probabilities must be positive");
        total += p;
        biggest = std::max(biggest, p);
      }
      if (total != 1) throw validation_error("atom probabilities must sum to 1");
      if (biggest == 1)
        throw validation_error("degenerate perturbation law (single atom of mass 1)");
    } else {
      if (!(lo < hi)) throw validation_error("uniform law needs lo < hi");
    }
  }
};

struct RandomSeriesConfig {
  CoefficientTemplate a, b, c;
  PerturbationLaw law;
  long factor_count = 0;  // V

  void validate() const {
    law.validate();
    if (factor_count < 0) throw validation_error("factor count must be >= 0");
    for (long nu = 1; nu <= std::min<long>(factor_count, 4); ++nu)
      if (a.eval(nu) <= 0) throw validation_error("a_nu must be positive");
  }

  // limsup proxy: max of -b/a over the top half of the generated indices.
  std::optional<BigRat> sigma_h() const {
    if (factor_count == 0) return std::nullopt;
    std::optional<BigRat> best;
    for (long nu = factor_count / 2 + 1; nu <= factor_count; ++nu) {
      BigRat r = -b.eval(nu) / a.eval(nu);
      if (!best || r > *best) best = r;
    }
    return best;
  }
};

struct Factor {
  long nu = 0;
  BigRat a, b, weight;  // weight = c_nu + eps_nu
  int atom_index = -1;  // which atom fired (discrete law), for the chi-square
};

struct Realization {
  std::uint64_t seed = 0;
  std::vector<Factor> factors;
};

// 53-bit dyadic uniform in [0, 1): exact as a rational.
inline BigRat dyadic_uniform(std::mt19937_64& rng) {
  std::uint64_t bits = rng() >> 11;
  return BigRat(BigInt(bits), BigInt(1) << 53);
}

inline Realization sample_realization(const RandomSeriesConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  Realization r;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  for (long nu = 1; nu <= config.factor_count; ++nu) {
    Factor f;
    f.nu = nu;
    f.a = config.a.eval(nu);
    f.b = config.b.eval(nu);
    BigRat eps;
    if (config.law.kind == PerturbationLaw::Kind::discrete) {
      BigRat u = dyadic_uniform(rng);
      BigRat cum = 0;
      f.atom_index = static_cast<int>(config.law.atoms.size()) - 1;
      for (std::size_t i = 0; i < config.law.atoms.size(); ++i) {
        cum += config.law.atoms[i].second;
        if (u < cum) {
          f.atom_index = static_cast<int>(i);
          break;
        }
      }
      eps = config.law.atoms[f.atom_index].first;
    } else {
      eps = config.law.lo + (config.law.hi - config.law.lo) * dyadic_uniform(rng);
    }
    f.weight = config.c.eval(nu) + eps;
    r.factors.push_back(std::move(f));
  }
  return r;
}

struct Box {
  double sigma1 = 0, sigma2 = 0, t1 = 0, t2 = 0;
};

struct DivisorPoint {
  std::complex<double> location;
  BigRat weight;       // exact merged weight
  bool is_pole_image = false;
  long zero_index = -1;  // 1-based table index for zero images
  bool cancelled = false;
  std::vector<long> contributors;  // nu values merged into this point
};

struct BoxDivisor {
  Box box;
  std::vector<DivisorPoint> points;                      // merged, cancelled kept
  std::vector<std::pair<std::size_t, std::size_t>> near_misses;  // index pairs
  BigRat weight_unmerged = 0;
  BigRat weight_merged = 0;
};

inline BoxDivisor divisor_in_box(const Realization& realization, const Box& box,
                                 const ZeroTable& zeros) {
  BoxDivisor out;
  out.box = box;
  // Exact merge keys: zero images share a point iff (a, b, zero, sign)
  // match; pole images iff the exact rational location matches.
  std::map<std::tuple<BigRat, BigRat, long, int>, std::size_t> zero_slots;
  std::map<std::pair<BigRat, BigRat>, std::size_t> pole_slots;  // location as (re, 0)

  auto inside = [&](double sig, double t) {
    return sig >= box.sigma1 && sig <= box.sigma2 && t >= box.t1 && t <= box.t2;
  };

  for (const auto& f : realization.factors) {
    double a = rat_to_double(f.a);
    BigRat re_zero = (BigRat(1, 2) - f.b) / f.a;  // exact real part of zero images
    double re_zero_d = rat_to_double(re_zero);

    // Coverage: the box's ordinate window under this factor.
    double gamma_hi = std::max(std::fabs(a * box.t1), std::fabs(a * box.t2));
    if (gamma_hi > static_cast<double>(zeros.t_max))
      throw validation_error("zero-table coverage insufficient for factor nu=" +
                             std::to_string(f.nu));

    for (int sign : {+1, -1}) {
      // gamma/a in [t1, t2] (sign-adjusted image of 1/2 + i gamma).
      double lo = (sign > 0 ? box.t1 : -box.t2) * a;
      double hi = (sign > 0 ? box.t2 : -box.t1) * a;
      if (lo > hi) std::swap(lo, hi);
      auto first = std::lower_bound(zeros.ordinates.begin(), zeros.ordinates.end(),
                                    static_cast<long double>(lo) - 1e-12L);
      for (auto it = first; it != zeros.ordinates.end() && *it <= hi + 1e-12L; ++it) {
        double gamma = static_cast<double>(*it);
        double t = sign * gamma / a;
        if (!inside(re_zero_d, t)) continue;
        long idx = (it - zeros.ordinates.begin()) + 1;
        auto key = std::make_tuple(f.a, f.b, idx, sign);
        auto [slot, fresh] = zero_slots.try_emplace(key, out.points.size());
        if (fresh) {
          DivisorPoint p;
          p.location = {re_zero_d, t};
          p.zero_index = idx;
          out.points.push_back(std::move(p));
        }
        out.points[slot->second].weight += f.weight;
        out.points[slot->second].contributors.push_back(f.nu);
        out.weight_unmerged += f.weight;
      }
    }

    // Pole preimage (1 - b)/a on the real axis, weight -w.
    BigRat pole_re = (BigRat(1) - f.b) / f.a;
    double pole_d = rat_to_double(pole_re);
    if (inside(pole_d, 0.0)) {
      auto key = std::make_pair(pole_re, BigRat(0));
      auto [slot, fresh] = pole_slots.try_emplace(key, out.points.size());
      if (fresh) {
        DivisorPoint p;
        p.location = {pole_d, 0.0};
        p.is_pole_image = true;
        out.points.push_back(std::move(p));
      }
      out.points[slot->second].weight += -f.weight;
      out.points[slot->second].contributors.push_back(f.nu);
      out.weight_unmerged += -f.weight;
    }
  }

  for (auto& p : out.points) {
    p.cancelled = (p.weight == 0);
    out.weight_merged += p.weight;
  }

  // Distinct exact keys whose floating locations collide within 1e-9 are
  // near misses: reported, never merged.
  std::vector<std::size_t> order(out.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::real(out.points[i].location) < std::real(out.points[j].location);
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (std::real(out.points[order[j]].location) -
              std::real(out.points[order[i]].location) > 1e-9)
        break;
      if (std::abs(out.points[order[i]].location - out.points[order[j]].location) < 1e-9)
        out.near_misses.emplace_back(order[i], order[j]);
    }
  return out;
}

struct ScanEntry {
  double t = 0;
  bool hit = false;   // box contains an uncancelled divisor point
  long points = 0;    // uncancelled point count
};

struct ScanReport {
  std::uint64_t seed = 0;
  double sigma_center = 0;
  double half_side = 0;
  std::vector<ScanEntry> entries;
  double hit_fraction = 0;
  double chi_square_p_value = 1.0;  // independence sanity, reported only
};

namespace detail {

// Upper regularized incomplete gamma Q(a, x) for the chi-square p-value.
inline double gammq(double a, double x) {
  if (x < 0 || a <= 0) return 1.0;
  if (x == 0) return 1.0;
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    double series = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return 1.0 - series;
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double chi_square_p(const Realization& realization, const PerturbationLaw& law) {
  if (law.kind != PerturbationLaw::Kind::discrete || realization.factors.empty())
    return 1.0;
  std::vector<long> counts(law.atoms.size(), 0);
  for (const auto& f : realization.factors)
    if (f.atom_index >= 0) ++counts[f.atom_index];
  double chi2 = 0;
  long v = static_cast<long>(realization.factors.size());
  for (std::size_t i = 0; i < law.atoms.size(); ++i) {
    double expect = rat_to_double(law.atoms[i].second) * v;
    double diff = counts[i] - expect;
    chi2 += diff * diff / expect;
  }
  double df = static_cast<double>(law.atoms.size()) - 1.0;
  return gammq(df / 2.0, chi2 / 2.0);
}

}  // namespace detail

inline ScanReport boundary_scan(const Realization& realization,
                                const RandomSeriesConfig& config, int box_n,
                                const std::vector<double>& t_grid,
                                const ZeroTable& zeros) {
  if (box_n < 1) throw validation_error("box size parameter n must be >= 1");
  ScanReport rep;
  rep.seed = realization.seed;
  auto sh = config.sigma_h();
  rep.sigma_center = sh ? rat_to_double(*sh) : 0.0;
  rep.half_side = 1.0 / box_n;
  long hits = 0;
  for (double t : t_grid) {
    Box box{rep.sigma_center - rep.half_side, rep.sigma_center + rep.half_side,
            t - rep.half_side, t + rep.half_side};
    auto divisor = divisor_in_box(realization, box, zeros);
    ScanEntry entry;
    entry.t = t;
    for (const auto& p : divisor.points)
      if (!p.cancelled) ++entry.points;
    entry.hit = entry.points > 0;
    if (entry.hit) ++hits;
    rep.entries.push_back(entry);
  }
  rep.hit_fraction = t_grid.empty() ? 0.0
                                    : static_cast<double>(hits) /
                                          static_cast<double>(t_grid.size());
  rep.chi_square_p_value = detail::chi_square_p(realization, config.law);
  return rep;
}

// The factor shape zeta(nu (s - 1/2) + 1/2), i.e. a = nu, b = (1 - nu)/2,
// with base exponent 2 perturbed by +-1: sigma_h = 1/2.
inline RandomSeriesConfig sigma_half_config(long factor_count) {
  RandomSeriesConfig cfg;
  cfg.a = CoefficientTemplate::affine(BigRat(1), BigRat(0));
  cfg.b = CoefficientTemplate::affine(BigRat(-1, 2), BigRat(1, 2));
  cfg.c = CoefficientTemplate::affine(BigRat(0), BigRat(2));
  cfg.law.kind = PerturbationLaw::Kind::discrete;
  cfg.law.atoms = {{BigRat(-1), BigRat(1, 2)}, {BigRat(1), BigRat(1, 2)}};
  cfg.factor_count = factor_count;
  return cfg;
}

}  // namespace eulerprod::randlab

#endif  // EULERPROD_RANDLAB_HPP
