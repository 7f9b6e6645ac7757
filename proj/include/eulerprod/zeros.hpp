// zeros.hpp
//
// Critical-line zero table: sign-change scan of Hardy's Z on a grid finer
// than the local average gap 2*pi/log(t/2pi), bisection refinement (bracketed,
// no derivative iteration), and completeness certification by the argument
// principle (Backlund's method):
//
//   N(T) = theta(T)/pi + 1 + S(T),
//   S(T) = (1/pi) * arg zeta(1/2 + iT)
//
// with the argument tracked continuously along Im s = T from Re s = 3, where
// |zeta - 1| < 0.21 pins the principal branch. The result must land within
// 0.01 of an integer and match the number of sign changes found, otherwise
// the grid is refined; a persistent mismatch is a hard certification error.
//
// The table caches to CSV (`zeros.csv`, header `index,ordinate`, 12 decimal
// places) plus a small metadata sidecar; a loaded cache is re-certified
// before use, never trusted blindly.

#ifndef EULERPROD_ZEROS_HPP
#define EULERPROD_ZEROS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "eulerprod/util.hpp"
#include "eulerprod/zeta.hpp"

namespace eulerprod::zetanum {

struct ZeroTable {
  std::vector<long double> ordinates;  // strictly increasing, gamma_1 first
  long double t_max = 0.0L;            // every zero with 0 < gamma <= t_max present
  long double precision = 1.0e-12L;
};

// Riemann-von Mangoldt main term (T/2pi) log(T/2pi) - T/2pi + 7/8.
inline long double rvm_main_term(long double t) {
  long double x = t / (2.0L * kPi);
  return x * std::log(x) - x + 0.875L;
}

// Argument-principle zero count for 0 < gamma <= T. T must not be (close to)
// an ordinate; callers pick certification points where |Z| is comfortably
// large.
inline long certified_zero_count(long double t) {
  long double theta = riemann_siegel_theta(t);
  // Track arg zeta along sigma: 3 -> 1/2 at height t, adaptive bisection of
  // segments so each principal-arg increment stays well below pi.
  struct Node {
    long double sigma;
    Complex z;
  };
  auto eval = [&](long double sigma) { return zeta(Complex(sigma, t), 13); };
  // |zeta(3+it) - 1| < 0.21, so the principal argument at sigma = 3 already
  // equals the argument continued in from the right.
  Node cur{3.0L, eval(3.0L)};
  long double total_arg = std::arg(cur.z);
  std::vector<Node> stack;
  stack.push_back({0.5L, eval(0.5L)});
  while (!stack.empty()) {
    Node next = stack.back();
    long double dar = std::arg(next.z / cur.z);
    if (std::fabs(dar) > 1.2L && cur.sigma - next.sigma > 1.0e-7L) {
      long double mid = 0.5L * (cur.sigma + next.sigma);
      stack.push_back({mid, eval(mid)});
      continue;
    }
    total_arg += dar;
    cur = next;
    stack.pop_back();
  }
  long double count = theta / kPi + 1.0L + total_arg / kPi;
  long double rounded = std::floor(count + 0.5L);
  if (std::fabs(count - rounded) > 0.01L)
    throw certification_error("argument-principle count did not settle near an integer");
  return static_cast<long>(rounded);
}

namespace detail {

inline long double scan_step(long double t, long double refine) {
  long double x = std::max(t, 20.0L) / (2.0L * kPi);
  long double gap = 2.0L * kPi / std::log(x);
  return std::max(0.005L, 0.25L * gap) * refine;
}

// Bisect a bracketing interval of Z to absolute width <= 5e-13.
inline long double bisect_zero(long double lo, long double hi, long double zlo) {
  for (int it = 0; it < 200 && hi - lo > 5.0e-13L; ++it) {
    long double mid = 0.5L * (lo + hi);
    long double zm = hardy_z(mid);
    if (zm == 0.0L) return mid;
    if ((zm > 0) == (zlo > 0)) {
      lo = mid;
      zlo = zm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

}  // namespace detail

// Locates all critical-line zeros with gamma <= t_req (the returned table may
// extend slightly beyond). Scanning is split into fixed blocks so the result
// is identical for any worker count.
inline ZeroTable locate_zeros(long double t_req, unsigned jobs = 1) {
  if (t_req > 5000.0L) throw validation_error("zero table limited to t <= 5000");
  if (t_req < 15.0L) t_req = 15.0L;
  const long double t_lo = 5.0L;
  const long double block_w = 64.0L;

  for (long double refine = 1.0L; refine > 1.0L / 16.0L; refine *= 0.5L) {
    long double t_hi = t_req + 4.0L;
    std::size_t n_blocks = static_cast<std::size_t>((t_hi - t_lo) / block_w) + 1;
    std::vector<std::vector<long double>> found(n_blocks);
    std::vector<std::vector<std::pair<long double, long double>>> grids(n_blocks);

    run_blocks(n_blocks, jobs, [&](std::size_t b) {
      long double start = t_lo + block_w * static_cast<long double>(b);
      long double end = std::min(start + block_w, t_hi);
      if (end <= start) return;
      long double h = detail::scan_step(end, refine);
      long n_steps = static_cast<long>(std::ceil((end - start) / h));
      h = (end - start) / static_cast<long double>(n_steps);
      long double prev_t = start;
      long double prev_z = hardy_z(prev_t);
      for (long i = 1; i <= n_steps; ++i) {
        long double t = start + h * static_cast<long double>(i);
        long double z = hardy_z(t);
        if (z == 0.0L) {
          t += h * 1.0e-6L;
          z = hardy_z(t);
        }
        if ((z > 0) != (prev_z > 0))
          found[b].push_back(detail::bisect_zero(prev_t, t, prev_z));
        grids[b].push_back({t, z});
        prev_t = t;
        prev_z = z;
      }
    });

    ZeroTable table;
    for (auto& blk : found)
      table.ordinates.insert(table.ordinates.end(), blk.begin(), blk.end());

    // Certification point: first grid t >= t_req where |Z| is comfortably
    // away from zero.
    std::optional<long double> t_cert;
    for (const auto& blk : grids) {
      for (const auto& [t, z] : blk) {
        if (t >= t_req && std::fabs(z) >= 0.05L) {
          t_cert = t;
          break;
        }
      }
      if (t_cert) break;
    }
    if (!t_cert) continue;  // refine

    long expected = certified_zero_count(*t_cert);
    long have = static_cast<long>(std::count_if(
        table.ordinates.begin(), table.ordinates.end(),
        [&](long double g) { return g <= *t_cert; }));
    if (have == expected) {
      table.ordinates.erase(
          std::remove_if(table.ordinates.begin(), table.ordinates.end(),
                         [&](long double g) { return g > *t_cert; }),
          table.ordinates.end());
      table.t_max = *t_cert;
      table.precision = 1.0e-12L;
      return table;
    }
  }
  throw certification_error("zero scan incomplete after grid refinement");
}

inline long zero_count(const ZeroTable& table, long double t) {
  if (t > table.t_max)
    throw validation_error("zero_count: T beyond table coverage");
  return static_cast<long>(std::upper_bound(table.ordinates.begin(),
                                            table.ordinates.end(), t) -
                           table.ordinates.begin());
}

inline bool backlund_gap_check(const ZeroTable& table, long double t) {
  if (t + 6.0L > table.t_max)
    throw validation_error("backlund_gap_check: T+6 beyond table coverage");
  return zero_count(table, t + 6.0L) > zero_count(table, t);
}

// ---------------------------------------------------------------------------
// Cache persistence.
// ---------------------------------------------------------------------------
inline std::filesystem::path zero_csv_path(const std::filesystem::path& dir) {
  return dir / "zeros.csv";
}
inline std::filesystem::path zero_meta_path(const std::filesystem::path& dir) {
  return dir / "zeros_meta.json";
}

inline void save_zero_table(const std::filesystem::path& dir, const ZeroTable& table) {
  std::filesystem::create_directories(dir);
  auto csv = zero_csv_path(dir);
  auto tmp = csv;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << "index,ordinate\n";
    char buf[64];
    for (std::size_t i = 0; i < table.ordinates.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.12Lf\n", i + 1, table.ordinates[i]);
      out << buf;
    }
  }
  std::filesystem::rename(tmp, csv);
  auto meta = zero_meta_path(dir);
  auto mtmp = meta;
  mtmp += ".tmp";
  {
    std::ofstream out(mtmp);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "{\"schema\":1,\"count\":%zu,\"t_max\":%.12Lf,\"precision\":%.3Le}\n",
                  table.ordinates.size(), table.t_max, table.precision);
    out << buf;
  }
  std::filesystem::rename(mtmp, meta);
}

// Structural + argument-principle re-certification of a loaded table.
inline void certify_table(const ZeroTable& table) {
  if (table.ordinates.empty())
    throw certification_error("zero cache certification failed: empty table");
  if (table.ordinates.front() < 14.13L || table.ordinates.front() > 14.14L)
    throw certification_error("zero cache certification failed: first ordinate out of range");
  for (std::size_t i = 1; i < table.ordinates.size(); ++i)
    if (table.ordinates[i] <= table.ordinates[i - 1])
      throw certification_error("zero cache certification failed: ordinates not increasing");
  if (table.ordinates.back() > table.t_max)
    throw certification_error("zero cache certification failed: ordinate beyond t_max");
  long expected = certified_zero_count(table.t_max);
  if (expected != static_cast<long>(table.ordinates.size()))
    throw certification_error("zero cache certification failed: count mismatch");
}

inline std::optional<ZeroTable> load_zero_table(const std::filesystem::path& dir) {
  auto csv = zero_csv_path(dir);
  auto meta = zero_meta_path(dir);
  if (!std::filesystem::exists(csv) || !std::filesystem::exists(meta)) return std::nullopt;
  ZeroTable table;
  {
    std::ifstream in(meta);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    auto grab = [&](const std::string& key) -> long double {
      auto pos = text.find("\"" + key + "\":");
      if (pos == std::string::npos)
        throw certification_error("zero cache certification failed: bad metadata");
      return std::strtold(text.c_str() + pos + key.size() + 3, nullptr);
    };
    table.t_max = grab("t_max");
    table.precision = grab("precision");
    long count = static_cast<long>(grab("count"));
    std::ifstream zin(csv);
    std::string line;
    if (!std::getline(zin, line) || line != "index,ordinate")
      throw certification_error("zero cache certification failed: bad CSV header");
    while (std::getline(zin, line)) {
      if (line.empty()) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos)
        throw certification_error("zero cache certification failed: bad CSV row");
      table.ordinates.push_back(std::strtold(line.c_str() + comma + 1, nullptr));
    }
    if (count != static_cast<long>(table.ordinates.size()))
      throw certification_error("zero cache certification failed: row count mismatch");
  }
  certify_table(table);
  return table;
}

}  // namespace eulerprod::zetanum

#endif  // EULERPROD_ZEROS_HPP
