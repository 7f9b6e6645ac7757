// presets.hpp
//
// Named product specifications shipped with the CLI.

#ifndef EULERPROD_PRESETS_HPP
#define EULERPROD_PRESETS_HPP

#include <string>

#include "eulerprod/bigint.hpp"
#include "eulerprod/dirichlet.hpp"
#include "eulerprod/polynomial.hpp"

namespace eulerprod::presets {

// Counting polarised submodules of Z^6: the generating Dirichlet series in
// w = s/3 is zeta(s) zeta(s-3) zeta(s-5) zeta(s-6) * prod_p W(p, p^-s) with
// the degree-(5,2) local factor below.
inline dirichlet::ProductSpec polarised_z6() {
  dirichlet::ProductSpec spec;
  spec.w = poly::parse_polynomial("1 + p*T + p^2*T + p^3*T + p^4*T + p^5*T^2");
  spec.prefactors = {{1, 0, 1}, {1, 3, 1}, {1, 5, 1}, {1, 6, 1}};
  spec.variable_scale = 3;
  return spec;
}

// The quadratic local factor whose zeta-factor expansion accumulates on the
// line Re s = 1/2.
inline dirichlet::ProductSpec half_boundary() {
  dirichlet::ProductSpec spec;
  spec.w = poly::parse_polynomial("1 + T + p*T^2");
  return spec;
}

inline dirichlet::ProductSpec product_spec_preset(const std::string& name) {
  if (name == "polarised-z6") return polarised_z6();
  if (name == "half-boundary") return half_boundary();
  throw validation_error("unknown preset: " + name);
}

}  // namespace eulerprod::presets

#endif  // EULERPROD_PRESETS_HPP
