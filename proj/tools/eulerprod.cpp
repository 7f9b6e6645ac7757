// eulerprod: batch front-end for Euler-product analysis.
//
// Subcommands: expand, density, coeffs, zeros, residues, explicit, randlab,
// cache. Reports are JSON (schema 1) or CSV; identical inputs against the
// same cache produce byte-identical reports regardless of --jobs.
// Exit codes: 0 success, 2 validation error, 3 numeric certification failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eulerprod/explicit_formula.hpp"
#include "eulerprod/json_io.hpp"
#include "eulerprod/presets.hpp"
#include "eulerprod/randlab.hpp"
#include "eulerprod/zeros.hpp"

namespace fs = std::filesystem;
using eulerprod::BigRat;
using eulerprod::certification_error;
using eulerprod::validation_error;
using eulerprod::jsonio::Json;
using eulerprod::zetanum::ZeroTable;

namespace {

struct GlobalOpts {
  std::string cache_dir;
  unsigned jobs = 1;
  std::string format = "json";
  std::string out = "-";
};

fs::path resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("EULERPROD_CACHE_DIR")) return env;
  return ".eulerprod-cache";
}

void write_text(const std::string& out, const std::string& text) {
  if (out == "-" || out.empty()) {
    std::cout << text;
    return;
  }
  fs::path p(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw validation_error("cannot open output file: " + out);
  f << text;
}

// Loads the cached table, extending (and re-saving) when coverage is short.
// A corrupt cache is a hard certification error, never silently rebuilt.
ZeroTable zeros_with_coverage(const fs::path& cache_dir, long double t_needed,
                              unsigned jobs) {
  auto cached = eulerprod::zetanum::load_zero_table(cache_dir);
  if (cached && cached->t_max >= t_needed) return *cached;
  ZeroTable table = eulerprod::zetanum::locate_zeros(t_needed, jobs);
  eulerprod::zetanum::save_zero_table(cache_dir, table);
  return table;
}

// Height covering at least `count` zeros, from the counting main term.
long double height_for_zero_count(std::size_t count) {
  long double t = 50.0L;
  while (eulerprod::zetanum::rvm_main_term(t) < count + 4.0L) t += 10.0L;
  return t;
}

eulerprod::dirichlet::ProductSpec spec_from_flags(const std::string& poly,
                                                  const std::string& preset,
                                                  const std::string& spec_file) {
  int sources = !poly.empty() + !preset.empty() + !spec_file.empty();
  if (sources != 1)
    throw validation_error("give exactly one of --poly, --preset, --spec");
  if (!poly.empty()) {
    eulerprod::dirichlet::ProductSpec spec;
    spec.w = eulerprod::poly::parse_polynomial(poly);
    return spec;
  }
  if (!preset.empty()) return eulerprod::presets::product_spec_preset(preset);
  std::ifstream in(spec_file);
  if (!in) throw validation_error("cannot read spec file: " + spec_file);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw validation_error(std::string("bad spec JSON: ") + e.what());
  }
  return eulerprod::jsonio::product_spec_from_json(j);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw validation_error("empty list: " + text);
  return out;
}

std::string csv_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------
Json run_expand(const eulerprod::dirichlet::ProductSpec& spec, int depth) {
  using namespace eulerprod::ghost;
  Json j;
  j["schema"] = 1;
  j["command"] = "expand";
  j["poly"] = spec.w.str();
  j["depth"] = depth;
  auto expansion = ghost_expand(spec.w, depth);
  j["expansion"] = eulerprod::jsonio::expansion_to_json(expansion);
  auto sigma = convergence_abscissa(spec.w);
  j["sigma_a"] = sigma ? Json(eulerprod::rat_to_string(*sigma)) : Json(nullptr);
  j["boundary"] = eulerprod::jsonio::boundary_to_json(candidate_boundary(expansion));
  j["estermann"] = eulerprod::jsonio::estermann_to_json(estermann_check(spec.w, depth));
  Json notes = Json::array();
  notes.push_back(
      "canonical expansion: factors with n/m left of the tail threshold are "
      "absorbable into a holomorphic remainder, so published factorization "
      "displays may carry them with the opposite sign");
  if (expansion.exponent(1, 3) != 0)
    notes.push_back("e(1,3) = " + expansion.exponent(1, 3).str() +
                    " here; displays listing zeta(3s-1) with exponent +1 differ "
                    "only by such an absorbable factor");
  j["notes"] = notes;
  return j;
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------
Json run_density(const eulerprod::dirichlet::ProductSpec& spec, int depth,
                 const std::string& variant, const std::string& beta,
                 const std::string& epsilon, const std::vector<double>& xs) {
  using namespace eulerprod::ghost;
  DensityVariant v;
  if (variant == "theorem1")
    v = DensityVariant::theorem1;
  else if (variant == "theorem2")
    v = DensityVariant::theorem2;
  else
    throw validation_error("variant must be theorem1 or theorem2");
  std::optional<BigRat> beta_rat;
  if (!beta.empty()) beta_rat = eulerprod::rat_from_string(beta);
  BigRat eps = eulerprod::rat_from_string(epsilon);
  double x_max = 0;
  for (double x : xs) x_max = std::max(x_max, x);
  int needed = static_cast<int>(std::ceil(x_max * (1.0 + eulerprod::rat_to_double(eps)))) + 1;
  if (depth < needed) depth = needed;
  auto expansion = ghost_expand(spec.w, depth);
  auto rep = boundary_prime_density(expansion, v, beta_rat, eps, xs);
  Json j;
  j["schema"] = 1;
  j["command"] = "density";
  j["poly"] = spec.w.str();
  j["depth"] = depth;
  j["density"] = eulerprod::jsonio::density_to_json(rep);
  return j;
}

// ---------------------------------------------------------------------------
// coeffs
// ---------------------------------------------------------------------------
struct CoeffsOutput {
  Json report;
  std::string csv;
};

CoeffsOutput run_coeffs(const eulerprod::dirichlet::ProductSpec& spec, long limit) {
  using namespace eulerprod::dirichlet;
  if (limit < 1) throw validation_error("--limit must be >= 1");
  auto arr = coefficient_sieve(spec, limit);

  // Dual-route check on the un-scaled index against the ghost expansion.
  long check_n = std::min<long>(limit, 10000);
  int depth = 1;
  while (std::pow(2.0, depth + 1) <= static_cast<double>(check_n)) ++depth;
  ProductSpec unscaled = spec;
  unscaled.variable_scale = 1;
  auto direct = coefficient_sieve(unscaled, check_n);
  auto expansion = eulerprod::ghost::ghost_expand(spec.w, depth);
  auto dual = coefficients_via_zeta_product(expansion, spec.prefactors, check_n);
  bool ok = true;
  long first_mismatch = 0;
  for (long n = 1; n <= check_n; ++n)
    if (direct.at(n) != dual.at(n)) {
      ok = false;
      first_mismatch = n;
      break;
    }
  if (!ok)
    throw certification_error("dual-route coefficient mismatch at n=" +
                              std::to_string(first_mismatch));

  CoeffsOutput out;
  Json j;
  j["schema"] = 1;
  j["command"] = "coeffs";
  j["poly"] = spec.w.str();
  j["limit"] = limit;
  j["support"] =
      arr.support_note == CoefficientArray::Support::powers
          ? Json("powers of " + std::to_string(arr.power))
          : Json("none");
  j["dual_route_checked_to"] = check_n;
  j["dual_route_ok"] = ok;
  Json head = Json::array();
  for (long n = 1; n <= std::min<long>(limit, 32); ++n) head.push_back(arr.at(n).str());
  j["head"] = head;
  out.report = j;

  std::string csv = "n,a_n\n";
  for (long n = 1; n <= limit; ++n) {
    csv += std::to_string(n);
    csv += ',';
    csv += arr.at(n).str();
    csv += '\n';
  }
  out.csv = csv;
  return out;
}

// ---------------------------------------------------------------------------
// zeros
// ---------------------------------------------------------------------------
struct ZerosOutput {
  Json report;
  std::string csv;
};

ZerosOutput run_zeros(const fs::path& cache_dir, long double t_max,
                      const std::string& gap_range, unsigned jobs) {
  long gap_lo = 0, gap_hi = -1;
  if (!gap_range.empty()) {
    auto colon = gap_range.find(':');
    gap_lo = std::stol(gap_range.substr(0, colon));
    gap_hi = colon == std::string::npos ? gap_lo
                                        : std::stol(gap_range.substr(colon + 1));
    t_max = std::max<long double>(t_max, gap_hi + 8.0L);
  }
  ZeroTable table = zeros_with_coverage(cache_dir, t_max, jobs);

  Json j;
  j["schema"] = 1;
  j["command"] = "zeros";
  j["t_max"] = eulerprod::jsonio::to_d(table.t_max);
  j["count"] = table.ordinates.size();
  Json first = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(3, table.ordinates.size()); ++i)
    first.push_back(eulerprod::jsonio::to_d(table.ordinates[i]));
  j["first"] = first;

  Json gaps = Json::array();
  if (gap_hi >= gap_lo && gap_lo > 0) {
    for (long T = gap_lo; T <= gap_hi; ++T) {
      Json g;
      g["T"] = T;
      long n_t = eulerprod::zetanum::zero_count(table, T);
      long n_t6 = eulerprod::zetanum::zero_count(table, T + 6.0L);
      g["n"] = n_t;
      g["n_plus_6"] = n_t6;
      g["ok"] = n_t6 > n_t;
      gaps.push_back(g);
    }
  }
  j["gap_checks"] = gaps;

  Json rvm = Json::array();
  for (long double T = 100.0L; T <= table.t_max; T += 100.0L) {
    Json r;
    r["T"] = eulerprod::jsonio::to_d(T);
    r["residual"] = eulerprod::jsonio::to_d(
        eulerprod::zetanum::zero_count(table, T) -
        eulerprod::zetanum::rvm_main_term(T));
    rvm.push_back(r);
  }
  j["rvm_residuals"] = rvm;
  j["notes"] = Json::array(
      {"count main term is (T/2pi)log(T/2pi) - T/2pi + 7/8; a displayed bound "
       "omitting the -T/2pi term fails for large T, so the corrected form is "
       "checked here together with the N(T+6) > N(T) consequence"});

  ZerosOutput out;
  out.report = j;
  std::string csv = "index,ordinate\n";
  char buf[64];
  for (std::size_t i = 0; i < table.ordinates.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.12Lf\n", i + 1, table.ordinates[i]);
    csv += buf;
  }
  out.csv = csv;
  return out;
}

// ---------------------------------------------------------------------------
// residues
// ---------------------------------------------------------------------------
Json run_residues(const eulerprod::dirichlet::ProductSpec& spec,
                  const std::string& poles_flag, int depth, long prime_cutoff) {
  eulerprod::explicit_formula::Engine engine(spec, nullptr, depth, prime_cutoff);
  std::vector<BigRat> poles;
  if (poles_flag.empty()) {
    poles = engine.pole_locations();
  } else {
    std::stringstream ss(poles_flag);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) poles.push_back(eulerprod::rat_from_string(item));
  }
  Json j;
  j["schema"] = 1;
  j["command"] = "residues";
  j["poly"] = spec.w.str();
  j["boundary_s"] = eulerprod::rat_to_string(engine.boundary_s());
  Json arr = Json::array();
  for (const auto& s0 : poles) {
    auto term = engine.residue_at_pole(s0);
    Json t;
    t["s"] = eulerprod::rat_to_string(term.location_s);
    t["residue_s"] = eulerprod::jsonio::to_d(term.residue_s);
    t["abs_error"] = eulerprod::jsonio::to_d(term.abs_error);
    t["exponent_w"] = eulerprod::jsonio::to_d(term.exponent_w);
    t["constant_a"] = eulerprod::jsonio::to_d(term.constant_a);
    t["constant_b"] = eulerprod::jsonio::to_d(term.constant_b);
    arr.push_back(t);
  }
  j["poles"] = arr;
  return j;
}

// ---------------------------------------------------------------------------
// explicit
// ---------------------------------------------------------------------------
struct ExplicitOutput {
  Json report;
  std::string csv;
};

ExplicitOutput run_explicit(const eulerprod::dirichlet::ProductSpec& spec,
                            const fs::path& cache_dir, double x_max,
                            std::size_t zero_count, const std::string& grid_flag,
                            const std::string& convention_flag, unsigned jobs) {
  using namespace eulerprod::explicit_formula;
  if (!(x_max >= 100.0)) throw validation_error("--xmax must be >= 100");

  std::vector<double> grid;
  if (!grid_flag.empty()) {
    grid = parse_double_list(grid_flag);
  } else {
    for (double lg = 2.0; lg <= std::log10(x_max) + 1e-9; lg += 0.5)
      grid.push_back(std::pow(10.0, lg));
  }

  ZeroTable table = zeros_with_coverage(
      cache_dir, height_for_zero_count(zero_count), jobs);
  Engine engine(spec, &table);
  auto poles = engine.main_terms();
  auto zterms = engine.zero_terms(zero_count, jobs);
  auto coeffs = eulerprod::dirichlet::coefficient_sieve(
      spec, smoothed_sum_cutoff(*std::max_element(grid.begin(), grid.end())));

  ConventionFit fit = select_convention(poles, coeffs, grid);
  Convention conv = fit.winner;
  if (convention_flag == "a")
    conv = Convention::a;
  else if (convention_flag == "b")
    conv = Convention::b;
  else if (convention_flag != "auto" && !convention_flag.empty())
    throw validation_error("--convention must be a, b or auto");

  std::vector<GridPoint> points;
  for (double x : grid)
    points.push_back(
        evaluate_point(poles, zterms, coeffs, x, conv, spec.variable_scale));
  ExponentFit expfit;
  bool have_fit = false;
  try {
    expfit = error_exponent_fit(points);
    have_fit = !expfit.floored;
  } catch (const validation_error& e) {
    expfit.verdict = e.what();
  }

  Json j;
  j["schema"] = 1;
  j["command"] = "explicit";
  j["poly"] = spec.w.str();
  j["variable_scale"] = spec.variable_scale;
  Json res;
  for (const auto& p : poles)
    res[eulerprod::rat_to_string(p.location_s)] = eulerprod::jsonio::to_d(p.residue_s);
  j["residues_s"] = res;
  {
    // Reciprocal-factor variants: both values reported, neither preferred.
    Json variants = Json::object();
    for (const auto& p : poles) {
      for (auto row : engine.zero_rows()) {
        long double arg = static_cast<long double>(row.first) *
                              static_cast<long double>(p.location_s) -
                          row.second;
        if (std::fabs(static_cast<double>(arg - 2.0L)) < 1e-12) {
          variants[eulerprod::rat_to_string(p.location_s) +
                   "_without_reciprocal_factor"] =
              eulerprod::jsonio::to_d(p.residue_s *
                                      eulerprod::zetanum::zeta_real(2.0L));
        }
      }
    }
    j["residue_variants"] = variants;
  }
  Json ca = Json::object(), cb = Json::object();
  for (const auto& p : poles) {
    std::string key = eulerprod::rat_to_string(p.location_s);
    ca[key] = eulerprod::jsonio::to_d(p.constant_a);
    cb[key] = eulerprod::jsonio::to_d(p.constant_b);
  }
  j["constants"] = Json{{"convention_a", ca}, {"convention_b", cb}};
  j["convention_fit"] = Json{
      {"winner", fit.winner == Convention::a ? "a" : "b"},
      {"applied", conv == Convention::a ? "a" : "b"},
      {"fitted_ratio", eulerprod::jsonio::to_d(fit.fitted_ratio)},
      {"cauchy_gap", eulerprod::jsonio::to_d(fit.cauchy_gap)},
      {"winner_discrepancy", eulerprod::jsonio::to_d(fit.winner_discrepancy)},
      {"loser_factor", eulerprod::jsonio::to_d(fit.loser_factor)}};
  Json zt = Json::array();
  for (const auto& t : zterms) {
    Json e;
    e["gamma"] = eulerprod::jsonio::to_d(t.gamma);
    e["w"] = {eulerprod::jsonio::to_d(t.w_exponent.real()),
              eulerprod::jsonio::to_d(t.w_exponent.imag())};
    e["alpha"] = {eulerprod::jsonio::to_d(t.alpha.real()),
                  eulerprod::jsonio::to_d(t.alpha.imag())};
    zt.push_back(e);
  }
  j["zero_terms"] = zt;
  Json comp = Json::array();
  for (const auto& g : points) comp.push_back(eulerprod::jsonio::grid_point_to_json(g));
  j["comparisons"] = comp;
  j["fitted_exponent"] = have_fit ? Json(eulerprod::jsonio::to_d(expfit.slope))
                                  : Json(nullptr);
  j["fit_verdict"] = expfit.verdict;
  j["notes"] = Json::array(
      {"residues are reported in the s-variable; the 1/scale Jacobian of "
       "w = s/scale is applied separately (convention B) and the dominance "
       "fit selects the operative convention",
       "smoothing kernel is exactly e^(-n/x) with the standard y^(-s) Mellin "
       "pairing",
       "zero terms use the accelerated product; conjugate pairs are combined "
       "into real contributions"});

  ExplicitOutput out;
  out.report = j;
  std::string csv = "x,A_direct,main,oscillatory,residual\n";
  char buf[160];
  for (const auto& g : points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.10Le,%.10Le,%.10Le,%.10Le\n", g.x,
                  g.a_direct, g.main, g.oscillatory, g.residual);
    csv += buf;
  }
  out.csv = csv;
  return out;
}

// ---------------------------------------------------------------------------
// randlab
// ---------------------------------------------------------------------------
struct RandlabOutput {
  Json report;
  std::string csv;
};

RandlabOutput run_randlab(const eulerprod::randlab::RandomSeriesConfig& cfg,
                          const fs::path& cache_dir,
                          const std::vector<std::uint64_t>& seeds, int box_n,
                          const std::vector<double>& t_grid, unsigned jobs) {
  using namespace eulerprod::randlab;
  if (box_n < 1) throw validation_error("--box-n must be >= 1");
  double t_top = 0;
  for (double t : t_grid) t_top = std::max(t_top, std::fabs(t));
  long double reach = 0;
  for (long nu = 1; nu <= cfg.factor_count; ++nu)
    reach = std::max(reach,
                     static_cast<long double>(eulerprod::rat_to_double(cfg.a.eval(nu))) *
                         (t_top + 1.0L / box_n));
  ZeroTable table = zeros_with_coverage(cache_dir, std::max(50.0L, reach + 2.0L), jobs);

  Json j;
  j["schema"] = 1;
  j["command"] = "randlab";
  auto sh = cfg.sigma_h();
  j["sigma_h"] = sh ? Json(eulerprod::rat_to_string(*sh)) : Json(nullptr);
  j["V"] = cfg.factor_count;
  j["box_n"] = box_n;
  Json seeds_json = Json::array();
  std::vector<double> hit_acc(t_grid.size(), 0.0);
  std::vector<double> pts_acc(t_grid.size(), 0.0);
  double overall = 0;
  for (std::uint64_t seed : seeds) {
    auto realization = sample_realization(cfg, seed);
    auto rep = boundary_scan(realization, cfg, box_n, t_grid, table);
    Json sj;
    sj["seed"] = seed;
    sj["hit_fraction"] = rep.hit_fraction;
    sj["chi_square_p"] = rep.chi_square_p_value;
    Json entries = Json::array();
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
      const auto& e = rep.entries[i];
      entries.push_back(Json{{"t", e.t}, {"hit", e.hit}, {"points", e.points}});
      hit_acc[i] += e.hit ? 1.0 : 0.0;
      pts_acc[i] += static_cast<double>(e.points);
    }
    sj["entries"] = entries;
    seeds_json.push_back(sj);
    overall += rep.hit_fraction;
  }
  j["seeds"] = seeds_json;
  j["overall_hit_fraction"] = seeds.empty() ? 0.0 : overall / seeds.size();
  j["notes"] = Json::array(
      {"divisors of the truncated factor product, not of the continued "
       "function; finite truncation V",
       "a stationary discrete perturbation law cannot satisfy the vanishing "
       "point-mass hypothesis; runs with such laws are demonstrations only"});

  RandlabOutput out;
  out.report = j;
  std::string csv = "t,box_hit,points\n";
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double denom = seeds.empty() ? 1.0 : static_cast<double>(seeds.size());
    csv += csv_double(t_grid[i]) + "," + csv_double(hit_acc[i] / denom) + "," +
           csv_double(pts_acc[i] / denom) + "\n";
  }
  out.csv = csv;
  return out;
}

// ---------------------------------------------------------------------------
// cache
// ---------------------------------------------------------------------------
Json run_cache(const fs::path& dir, const std::string& action, long double t_max,
               unsigned jobs) {
  Json j;
  j["schema"] = 1;
  j["command"] = "cache";
  j["action"] = action;
  if (action == "warm") {
    auto cached = eulerprod::zetanum::load_zero_table(dir);
    if (!cached || cached->t_max < t_max) {
      auto table = eulerprod::zetanum::locate_zeros(t_max, jobs);
      eulerprod::zetanum::save_zero_table(dir, table);
      j["count"] = table.ordinates.size();
      j["t_max"] = eulerprod::jsonio::to_d(table.t_max);
    } else {
      j["count"] = cached->ordinates.size();
      j["t_max"] = eulerprod::jsonio::to_d(cached->t_max);
    }
    j["ok"] = true;
  } else if (action == "verify") {
    auto csv = eulerprod::zetanum::zero_csv_path(dir);
    if (!fs::exists(csv)) throw validation_error("no zero cache at " + dir.string());
    try {
      auto table = eulerprod::zetanum::load_zero_table(dir);
      j["count"] = table->ordinates.size();
      j["t_max"] = eulerprod::jsonio::to_d(table->t_max);
      j["ok"] = true;
    } catch (const certification_error&) {
      // Quarantine, never silently rebuild.
      fs::rename(csv, fs::path(csv).concat(".corrupt"));
      auto meta = eulerprod::zetanum::zero_meta_path(dir);
      if (fs::exists(meta)) fs::rename(meta, fs::path(meta).concat(".corrupt"));
      throw;
    }
  } else if (action == "purge") {
    fs::remove(eulerprod::zetanum::zero_csv_path(dir));
    fs::remove(eulerprod::zetanum::zero_meta_path(dir));
    j["ok"] = true;
  } else {
    throw validation_error("cache action must be warm, verify or purge");
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-product zeta-factor analysis"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--cache-dir", g.cache_dir, "zero-table cache directory");
  app.add_option("--jobs", g.jobs, "worker cap (results are identical for any value)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "output file, - for stdout");

  std::string poly, preset, spec_file;
  auto add_spec_flags = [&](CLI::App* cmd) {
    cmd->add_option("--poly", poly, "local factor, e.g. \"1 + T + p*T^2\"");
    cmd->add_option("--preset", preset, "polarised-z6 or half-boundary");
    cmd->add_option("--spec", spec_file, "JSON spec file");
  };

  auto* cmd_expand = app.add_subcommand("expand", "zeta-factor expansion + boundary + termination")->fallthrough();
  int depth = 24;
  add_spec_flags(cmd_expand);
  cmd_expand->add_option("--depth", depth, "truncation depth");

  auto* cmd_density = app.add_subcommand("density", "boundary prime-density diagnostic")->fallthrough();
  std::string variant = "theorem1", beta, epsilon = "1", xs_flag = "10,20";
  int density_depth = 0;
  add_spec_flags(cmd_density);
  cmd_density->add_option("--variant", variant, "theorem1 or theorem2");
  cmd_density->add_option("--beta", beta, "boundary for theorem2, as p/q");
  cmd_density->add_option("--epsilon", epsilon, "window parameter, as p/q");
  cmd_density->add_option("--x", xs_flag, "comma-separated x grid");
  cmd_density->add_option("--depth", density_depth, "expansion depth override");

  auto* cmd_coeffs = app.add_subcommand("coeffs", "coefficient sieve + dual-route check")->fallthrough();
  long limit = 10000;
  add_spec_flags(cmd_coeffs);
  cmd_coeffs->add_option("--limit", limit, "coefficient bound N");

  auto* cmd_zeros = app.add_subcommand("zeros", "zero table + gap checks")->fallthrough();
  double tmax = 150.0;
  std::string gaps;
  cmd_zeros->add_option("--tmax", tmax, "table coverage");
  cmd_zeros->add_option("--check-gaps", gaps, "integer range T0:T1 for N(T+6) > N(T)");

  auto* cmd_residues = app.add_subcommand("residues", "residues at simple poles")->fallthrough();
  std::string poles_flag;
  int accel_depth = 8;
  long prime_cutoff = 100000;
  add_spec_flags(cmd_residues);
  cmd_residues->add_option("--poles", poles_flag, "comma-separated pole list (default: all)");
  cmd_residues->add_option("--depth", accel_depth, "acceleration depth");
  cmd_residues->add_option("--prime-cutoff", prime_cutoff, "remainder prime cutoff");

  auto* cmd_explicit = app.add_subcommand("explicit", "smoothed-sum explicit-formula report")->fallthrough();
  double xmax = 1.0e4;
  std::size_t n_zero_terms = 50;
  std::string grid_flag, convention = "auto";
  add_spec_flags(cmd_explicit);
  cmd_explicit->add_option("--xmax", xmax, "largest x");
  cmd_explicit->add_option("--zeros", n_zero_terms, "zero terms per reciprocal factor");
  cmd_explicit->add_option("--grid", grid_flag, "comma-separated x grid");
  cmd_explicit->add_option("--convention", convention, "a, b or auto");

  auto* cmd_randlab = app.add_subcommand("randlab", "random zeta-product boundary scan")->fallthrough();
  std::string rl_config, rl_preset = "sigma-half", seeds_flag = "1";
  long rl_v = 50;
  int box_n = 10;
  double t_from = 5.0, t_to = 20.0, t_step = 1.0;
  cmd_randlab->add_option("--config", rl_config, "JSON config file");
  cmd_randlab->add_option("--rl-preset", rl_preset, "sigma-half");
  cmd_randlab->add_option("--V", rl_v, "factor count");
  cmd_randlab->add_option("--seeds", seeds_flag, "comma-separated seed list");
  cmd_randlab->add_option("--box-n", box_n, "box size parameter (side 2/n)");
  cmd_randlab->add_option("--t-from", t_from, "first box center");
  cmd_randlab->add_option("--t-to", t_to, "last box center");
  cmd_randlab->add_option("--t-step", t_step, "box center step");

  auto* cmd_cache = app.add_subcommand("cache", "zero-cache administration")->fallthrough();
  std::string action;
  double cache_tmax = 150.0;
  cmd_cache->add_option("action", action, "warm, verify or purge")->required();
  cmd_cache->add_option("--tmax", cache_tmax, "warm coverage");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::path cache_dir = resolve_cache_dir(g.cache_dir);
    Json report;
    std::string csv;

    if (cmd_expand->parsed()) {
      report = run_expand(spec_from_flags(poly, preset, spec_file), depth);
    } else if (cmd_density->parsed()) {
      report = run_density(spec_from_flags(poly, preset, spec_file), density_depth,
                           variant, beta, epsilon, parse_double_list(xs_flag));
    } else if (cmd_coeffs->parsed()) {
      auto out = run_coeffs(spec_from_flags(poly, preset, spec_file), limit);
      report = out.report;
      csv = out.csv;
    } else if (cmd_zeros->parsed()) {
      auto out = run_zeros(cache_dir, static_cast<long double>(tmax), gaps, g.jobs);
      report = out.report;
      csv = out.csv;
    } else if (cmd_residues->parsed()) {
      report = run_residues(spec_from_flags(poly, preset, spec_file), poles_flag,
                            accel_depth, prime_cutoff);
    } else if (cmd_explicit->parsed()) {
      auto out = run_explicit(spec_from_flags(poly, preset, spec_file), cache_dir,
                              xmax, n_zero_terms, grid_flag, convention, g.jobs);
      report = out.report;
      csv = out.csv;
    } else if (cmd_randlab->parsed()) {
      eulerprod::randlab::RandomSeriesConfig cfg;
      if (!rl_config.empty()) {
        std::ifstream in(rl_config);
        if (!in) throw validation_error("cannot read config file: " + rl_config);
        Json cj;
        try {
          in >> cj;
        } catch (const std::exception& e) {
          throw validation_error(std::string("bad config JSON: ") + e.what());
        }
        cfg = eulerprod::jsonio::randlab_config_from_json(cj);
      } else if (rl_preset == "sigma-half") {
        cfg = eulerprod::randlab::sigma_half_config(rl_v);
      } else {
        throw validation_error("unknown randlab preset: " + rl_preset);
      }
      std::vector<std::uint64_t> seeds;
      for (double v : parse_double_list(seeds_flag))
        seeds.push_back(static_cast<std::uint64_t>(v));
      std::vector<double> t_grid;
      if (t_step <= 0) throw validation_error("--t-step must be positive");
      for (double t = t_from; t <= t_to + 1e-12; t += t_step) t_grid.push_back(t);
      auto out = run_randlab(cfg, cache_dir, seeds, box_n, t_grid, g.jobs);
      report = out.report;
      csv = out.csv;
    } else if (cmd_cache->parsed()) {
      report = run_cache(cache_dir, action, static_cast<long double>(cache_tmax), g.jobs);
    }

    if (g.format == "csv") {
      if (csv.empty())
        throw validation_error("this subcommand has no CSV form; use --format json");
      write_text(g.out, csv);
    } else {
      write_text(g.out, report.dump(2) + "\n");
    }
    return 0;
  } catch (const validation_error& e) {
    Json err{{"schema", 1}, {"error", {{"code", "validation"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const certification_error& e) {
    Json err{{"schema", 1}, {"error", {{"code", "certification"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    Json err{{"schema", 1}, {"error", {{"code", "internal"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 3;
  }
}
