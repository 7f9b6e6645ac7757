// json_io.hpp
//
// JSON bindings: product-spec files, randlab configs, and the report
// documents emitted by the CLI. Reports use insertion-ordered objects and a
// fixed schema version so identical runs serialize to identical bytes.

#ifndef EULERPROD_JSON_IO_HPP
#define EULERPROD_JSON_IO_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "eulerprod/bigint.hpp"
#include "eulerprod/dirichlet.hpp"
#include "eulerprod/explicit_formula.hpp"
#include "eulerprod/ghost.hpp"
#include "eulerprod/presets.hpp"
#include "eulerprod/randlab.hpp"

namespace eulerprod::jsonio {

using Json = nlohmann::ordered_json;

inline double to_d(long double x) { return static_cast<double>(x); }

// ---------------------------------------------------------------------------
// Product spec documents: {"poly": "...", "prefactors": [[a,b,c]...],
// "variable_scale": k}.
// ---------------------------------------------------------------------------
inline dirichlet::ProductSpec product_spec_from_json(const Json& j) {
  dirichlet::ProductSpec spec;
  if (!j.contains("poly") || !j["poly"].is_string())
    throw validation_error("spec document needs a \"poly\" string");
  spec.w = poly::parse_polynomial(j["poly"].get<std::string>());
  if (j.contains("prefactors")) {
    for (const auto& f : j["prefactors"]) {
      if (!f.is_array() || f.size() != 3)
        throw validation_error("prefactor entries are [a, b, c] triples");
      spec.prefactors.push_back({f[0].get<int>(), f[1].get<int>(),
                                 BigInt(f[2].get<long long>())});
    }
  }
  if (j.contains("variable_scale")) spec.variable_scale = j["variable_scale"].get<int>();
  spec.validate();
  return spec;
}

inline Json product_spec_to_json(const dirichlet::ProductSpec& spec) {
  Json j;
  j["poly"] = spec.w.str();
  Json pf = Json::array();
  for (const auto& f : spec.prefactors)
    pf.push_back({f.a, f.b, static_cast<long long>(f.c)});
  j["prefactors"] = pf;
  j["variable_scale"] = spec.variable_scale;
  return j;
}

// ---------------------------------------------------------------------------
// Randlab configs:
// {"factors": {"a": {...}, "b": {...}, "c": {...}},
//  "perturbation": {"type": "discrete", "atoms": [["val", "prob"]...]} |
//                  {"type": "uniform", "lo": "p/q", "hi": "p/q"},
//  "V": 50}
// Coefficient templates: {"type": "affine", "mul": "p/q", "add": "p/q"} or
// {"type": "rational", "mul":..., "add":..., "den_mul":..., "den_add":...}.
// ---------------------------------------------------------------------------
inline randlab::CoefficientTemplate template_from_json(const Json& j) {
  randlab::CoefficientTemplate t;
  std::string type = j.value("type", "affine");
  t.mul = rat_from_string(j.value("mul", "0"));
  t.add = rat_from_string(j.value("add", "0"));
  if (type == "rational") {
    t.den_mul = rat_from_string(j.value("den_mul", "0"));
    t.den_add = rat_from_string(j.value("den_add", "1"));
  } else if (type != "affine") {
    throw validation_error("coefficient template type must be affine or rational");
  }
  return t;
}

inline randlab::RandomSeriesConfig randlab_config_from_json(const Json& j) {
  randlab::RandomSeriesConfig cfg;
  if (!j.contains("factors"))
    throw validation_error("randlab config needs a \"factors\" object");
  cfg.a = template_from_json(j["factors"].at("a"));
  cfg.b = template_from_json(j["factors"].at("b"));
  cfg.c = template_from_json(j["factors"].at("c"));
  const auto& p = j.at("perturbation");
  std::string type = p.value("type", "discrete");
  if (type == "discrete") {
    cfg.law.kind = randlab::PerturbationLaw::Kind::discrete;
    for (const auto& atom : p.at("atoms"))
      cfg.law.atoms.emplace_back(rat_from_string(atom.at(0).get<std::string>()),
                                 rat_from_string(atom.at(1).get<std::string>()));
  } else if (type == "uniform") {
    cfg.law.kind = randlab::PerturbationLaw::Kind::uniform;
    cfg.law.lo = rat_from_string(p.at("lo").get<std::string>());
    cfg.law.hi = rat_from_string(p.at("hi").get<std::string>());
  } else {
    throw validation_error("perturbation type must be discrete or uniform");
  }
  cfg.factor_count = j.value("V", 0L);
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Report fragments.
// ---------------------------------------------------------------------------
inline Json expansion_to_json(const ghost::GhostExpansion& e) {
  Json rows = Json::array();
  for (const auto& [mn, v] : e.exponents) {
    Json r;
    r["n"] = mn.second;
    r["m"] = mn.first;
    r["e"] = v.str();
    rows.push_back(r);
  }
  return rows;
}

inline Json boundary_to_json(const ghost::BoundaryEstimate& b) {
  Json j;
  j["global_sup"] = b.global_sup ? Json(rat_to_string(*b.global_sup)) : Json(nullptr);
  j["tail_sup"] = b.tail_sup ? Json(rat_to_string(*b.tail_sup)) : Json(nullptr);
  Json per = Json::array();
  for (const auto& r : b.per_m) {
    Json e;
    e["m"] = r.m;
    e["n"] = r.n_at_max;
    e["ratio"] = rat_to_string(r.max_ratio);
    per.push_back(e);
  }
  j["per_m"] = per;
  if (!b.pattern_note.empty()) j["pattern_note"] = b.pattern_note;
  return j;
}

inline Json estermann_to_json(const ghost::EstermannReport& rep) {
  Json j;
  j["terminated"] = rep.terminated;
  Json fs = Json::array();
  for (const auto& [n, m, e] : rep.factors) {
    Json f;
    f["n"] = n;
    f["m"] = m;
    f["e"] = e.str();
    fs.push_back(f);
  }
  j["factors"] = fs;
  j["agreement_order"] = rep.agreement_order;
  return j;
}

inline Json density_to_json(const ghost::DensityReport& rep) {
  Json j;
  j["variant"] = rep.variant == ghost::DensityVariant::theorem1 ? "theorem1" : "theorem2";
  j["beta"] = rat_to_string(rep.beta_used);
  j["epsilon"] = rat_to_string(rep.epsilon);
  j["members"] = rep.member_primes;
  Json pc = Json::array();
  for (const auto& [x, c] : rep.prime_counts) pc.push_back({{"x", x}, {"count", c}});
  j["prime_counts"] = pc;
  Json wc = Json::array();
  for (std::size_t i = 0; i < rep.window_counts.size(); ++i) {
    Json e;
    e["x"] = rep.window_counts[i].first;
    e["count"] = rep.window_counts[i].second;
    e["reference"] = rep.reference_curve[i].second;
    wc.push_back(e);
  }
  j["window_counts"] = wc;
  j["reference_exponent"] = "in [0.618, 0.619): (sqrt(5)-1)/2";
  j["verdict"] = rep.verdict;
  return j;
}

inline Json grid_point_to_json(const explicit_formula::GridPoint& g) {
  Json j;
  j["x"] = g.x;
  j["a_direct"] = to_d(g.a_direct);
  j["main"] = to_d(g.main);
  j["oscillatory"] = to_d(g.oscillatory);
  j["residual"] = to_d(g.residual);
  return j;
}

}  // namespace eulerprod::jsonio

#endif  // EULERPROD_JSON_IO_HPP
