#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "eulerprod/zeros.hpp"

using namespace eulerprod::zetanum;
using eulerprod::certification_error;
using eulerprod::validation_error;

namespace {

const ZeroTable& table_240() {
  static const ZeroTable t = locate_zeros(240.0L, 4);
  return t;
}

}  // namespace

TEST_CASE("first three ordinates to twelve digits") {
  const auto& t = table_240();
  REQUIRE(t.ordinates.size() >= 3);
  CHECK(t.ordinates[0] >= 14.13L);
  CHECK(t.ordinates[0] <= 14.14L);
  CHECK(std::fabs(t.ordinates[0] - 14.134725141734694L) < 2e-11L);
  CHECK(std::fabs(t.ordinates[1] - 21.022039638771555L) < 2e-11L);
  CHECK(std::fabs(t.ordinates[2] - 25.010857580145689L) < 2e-11L);
}

TEST_CASE("counts: none below 10, certified 29 below 100") {
  const auto& t = table_240();
  CHECK(zero_count(t, 10.0L) == 0);
  CHECK(zero_count(t, 15.0L) == 1);
  CHECK(zero_count(t, 100.0L) == 29);
  CHECK(certified_zero_count(100.0L) == 29);
  CHECK_THROWS_AS(zero_count(t, 500.0L), validation_error);
}

TEST_CASE("argument-principle count agrees with the table on a grid") {
  const auto& t = table_240();
  for (long double T : {40.0L, 90.0L, 140.0L, 190.0L, 235.0L})
    CHECK(certified_zero_count(T) == zero_count(t, T));
}

TEST_CASE("gap check wrapper") {
  const auto& t = table_240();
  CHECK(backlund_gap_check(t, 100.0L));
  CHECK_THROWS_AS(backlund_gap_check(t, t.t_max - 1.0L), validation_error);
}

TEST_CASE("main-term residual stays within 2 on sampled heights") {
  const auto& t = table_240();
  for (long double T : {100.0L, 130.0L, 160.0L, 190.0L, 220.0L}) {
    long double resid = zero_count(t, T) - rvm_main_term(T);
    CHECK(std::fabs(resid) <= 2.0L);
    CHECK(std::fabs(resid) <= 0.7L * std::log(T));
  }
}

TEST_CASE("main-term residual to height 2000") {
  // The one deliberately slow test: a fresh table past 2000 so the
  // corrected count formula can be sampled across the full range. The
  // bound with the -T/2pi term dropped fails from T ~ 300 on, which is the
  // reason the corrected form is the one checked.
  auto t = locate_zeros(2006.0L, 4);
  for (long double T = 100.0L; T <= 2000.0L; T += 50.0L) {
    long double resid = zero_count(t, T) - rvm_main_term(T);
    CHECK(std::fabs(resid) <= 2.0L);
    long double uncorrected = zero_count(t, T) -
                              (T / (2.0L * kPi)) * std::log(T / (2.0L * kPi));
    if (T >= 400.0L) CHECK(std::fabs(uncorrected) > 0.7L * std::log(T));
  }
}

TEST_CASE("table is identical for any worker count") {
  auto t1 = locate_zeros(60.0L, 1);
  auto t4 = locate_zeros(60.0L, 4);
  CHECK(t1.ordinates == t4.ordinates);
  CHECK(t1.t_max == t4.t_max);
}

TEST_CASE("cache round-trips and is re-certified on load") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "eulerprod_test_cache";
  fs::remove_all(dir);
  const auto& t = table_240();
  save_zero_table(dir, t);

  auto loaded = load_zero_table(dir);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->ordinates.size() == t.ordinates.size());
  for (std::size_t i = 0; i < t.ordinates.size(); ++i)
    CHECK(std::fabs(loaded->ordinates[i] - t.ordinates[i]) < 1e-12L);

  SECTION("truncated CSV fails certification") {
    // Drop the last two rows, keep the metadata: count mismatch.
    std::ifstream in(zero_csv_path(dir));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    std::ofstream out(zero_csv_path(dir), std::ios::trunc);
    for (std::size_t i = 0; i + 2 < lines.size(); ++i) out << lines[i] << "\n";
    out.close();
    CHECK_THROWS_AS(load_zero_table(dir), certification_error);
  }
  fs::remove_all(dir);
}
