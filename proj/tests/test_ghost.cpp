#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <utility>

#include "eulerprod/ghost.hpp"

using eulerprod::BigInt;
using eulerprod::BigRat;
using eulerprod::certification_error;
using eulerprod::validation_error;
using namespace eulerprod::ghost;
using eulerprod::poly::BivariatePolynomial;
using eulerprod::poly::parse_polynomial;
using eulerprod::poly::TruncatedSeries;

namespace {
BivariatePolynomial quadratic_demo() { return parse_polynomial("1 + T + p*T^2"); }
BivariatePolynomial rank3_counting() {
  return parse_polynomial("1 + p*T + p^2*T + p^3*T + p^4*T + p^5*T^2");
}
}  // namespace

TEST_CASE("expansion of 1 + Y + uY^2 through depth 4") {
  auto e = ghost_expand(quadratic_demo(), 4);
  CHECK(e.exponent(0, 1) == 1);
  CHECK(e.exponent(1, 2) == 1);
  CHECK(e.exponent(0, 2) == -1);
  // The canonical expansion forces e(1,3) = -1 (an exact reconstruction
  // mod Y^4 leaves no freedom); displays that absorb sub-boundary factors
  // into a holomorphic remainder can show this factor with opposite sign.
  CHECK(e.exponent(1, 3) == -1);
  CHECK(e.exponent(2, 4) == -1);
  CHECK(e.exponent(1, 4) == 1);
}

TEST_CASE("positive exponent family e(2m, 4m+1) = +1") {
  auto e = ghost_expand(quadratic_demo(), 24);
  CHECK(e.exponent(2, 5) == 1);
  CHECK(e.exponent(4, 9) == 1);
  CHECK(e.exponent(6, 13) == 1);
  CHECK(e.exponent(8, 17) == 1);
  CHECK(e.exponent(10, 21) == 1);
  // The mirror family at m = 4k+3 carries exponent -1 at the top.
  CHECK(e.exponent(1, 3) == -1);
  CHECK(e.exponent(3, 7) == -1);
  CHECK(e.exponent(9, 19) == -1);
}

TEST_CASE("m=1 and m=2 rows of the degree-(5,2) factor") {
  auto e = ghost_expand(rank3_counting(), 2);
  for (int n = 1; n <= 4; ++n) CHECK(e.exponent(n, 1) == 1);
  CHECK(e.exponent(0, 1) == 0);
  CHECK(e.exponent(5, 1) == 0);
  // Hand inversion of the m=2 row: E_2 = (B_2(u) - B_1(u^2)) / 2.
  CHECK(e.exponent(2, 2) == -1);
  CHECK(e.exponent(3, 2) == -1);
  CHECK(e.exponent(4, 2) == -2);
  CHECK(e.exponent(5, 2) == -1);
  CHECK(e.exponent(6, 2) == -2);
  CHECK(e.exponent(7, 2) == -1);
  CHECK(e.exponent(8, 2) == -1);
}

TEST_CASE("round trip: reconstruct(expand(W)) == W mod Y^(M+1)") {
  std::mt19937 rng(55221u);
  for (int trial = 0; trial < 60; ++trial) {
    std::map<std::pair<int, int>, BigInt> terms{{{0, 0}, 1}};
    int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      int n = static_cast<int>(rng() % 5);
      int m = 1 + static_cast<int>(rng() % 4);
      int c = static_cast<int>(rng() % 7) - 3;
      if (c != 0) terms[{n, m}] += c;
    }
    BivariatePolynomial w;
    try {
      w = BivariatePolynomial::from_terms(terms);
    } catch (const validation_error&) {
      continue;
    }
    int depth = 12;
    auto e = ghost_expand(w, depth);  // self-verifies integrality + reconstruction
    auto s = product_reconstruct(e, depth);
    CHECK(s == TruncatedSeries::from_polynomial(w, depth));
  }
}

TEST_CASE("expansion is additive over products of local factors") {
  auto w1 = parse_polynomial("1 + T + p*T^2");
  auto w2 = parse_polynomial("1 - p*T^3");
  auto sum = ghost_expand(w1, 10) + ghost_expand(w2, 10);
  auto direct = ghost_expand(w1 * w2, 10);
  CHECK(sum.exponents == direct.exponents);
}

TEST_CASE("reconstruct demands sufficient depth") {
  auto e = ghost_expand(quadratic_demo(), 6);
  CHECK_THROWS_AS(product_reconstruct(e, 12), validation_error);
}

TEST_CASE("convergence abscissa upper bound") {
  CHECK(convergence_abscissa(quadratic_demo()) == BigRat(1));
  CHECK(convergence_abscissa(parse_polynomial("1 + p^5*T^2")) == BigRat(3));
  CHECK(convergence_abscissa(rank3_counting()) == BigRat(5));
  CHECK(!convergence_abscissa(parse_polynomial("1")).has_value());
}

TEST_CASE("candidate boundary of 1 + Y + uY^2 stays below 1/2 and climbs") {
  auto e12 = ghost_expand(quadratic_demo(), 12);
  auto e24 = ghost_expand(quadratic_demo(), 24);
  auto b12 = candidate_boundary(e12);
  auto b24 = candidate_boundary(e24);
  REQUIRE(b24.tail_sup.has_value());
  CHECK(*b24.tail_sup < BigRat(1, 2));
  CHECK(*b24.tail_sup > *b12.tail_sup);
  REQUIRE(b24.global_sup.has_value());
  CHECK(*b24.tail_sup <= *b24.global_sup);
  // The positive family maximizes the tail rows: ratio 2m/(4m+1).
  CHECK(*b24.tail_sup == BigRat(b24.tail_n, b24.tail_m));
}

TEST_CASE("candidate boundary of a single factor") {
  auto e = ghost_expand(parse_polynomial("1 - p*T^3"), 3);
  auto b = candidate_boundary(e);
  REQUIRE(b.global_sup.has_value());
  CHECK(*b.global_sup == BigRat(1, 3));
  CHECK(*b.tail_sup == BigRat(1, 3));
}

TEST_CASE("candidate boundary of the degree-(5,2) factor approaches 4") {
  auto b = candidate_boundary(ghost_expand(rank3_counting(), 16));
  REQUIRE(b.tail_sup.has_value());
  CHECK(*b.tail_sup > BigRat(7, 2));
  CHECK(*b.tail_sup <= BigRat(4));
}

TEST_CASE("termination: explicit finite products") {
  // (1 - Y)(1 - uY^2) entered expanded.
  auto rep = estermann_check(parse_polynomial("1 - T - p*T^2 + p*T^3"), 24);
  CHECK(rep.terminated);
  REQUIRE(rep.factors.size() == 2);
  CHECK(rep.factors[0] == std::tuple<int, int, BigInt>(0, 1, BigInt(-1)));
  CHECK(rep.factors[1] == std::tuple<int, int, BigInt>(1, 2, BigInt(-1)));

  auto rep2 = estermann_check(parse_polynomial("1 - p^2*T^5"), 24);
  CHECK(rep2.terminated);
  REQUIRE(rep2.factors.size() == 1);
  CHECK(rep2.factors[0] == std::tuple<int, int, BigInt>(2, 5, BigInt(-1)));
}

TEST_CASE("termination soundness on a mixed-sign finite factorization") {
  // 1 + Y = (1 - Y^2)/(1 - Y): exponents of both signs, still terminating.
  auto rep = estermann_check(parse_polynomial("1 + T"), 24);
  CHECK(rep.terminated);
  REQUIRE(rep.factors.size() == 2);
  CHECK(rep.factors[0] == std::tuple<int, int, BigInt>(0, 1, BigInt(1)));
  CHECK(rep.factors[1] == std::tuple<int, int, BigInt>(0, 2, BigInt(-1)));
}

TEST_CASE("1 + Y + uY^2 does not terminate through depth 24") {
  auto rep = estermann_check(quadratic_demo(), 24);
  CHECK(!rep.terminated);
  auto e = ghost_expand(quadratic_demo(), 24);
  // Nonzero exponents in every dyadic block of m.
  for (auto [lo, hi] : std::vector<std::pair<int, int>>{{1, 2}, {3, 4}, {5, 8}, {9, 16}, {17, 24}}) {
    bool any = false;
    for (int m = lo; m <= hi && !any; ++m) any = !e.row(m).empty();
    CHECK(any);
  }
}

TEST_CASE("prime density diagnostic for the positive family") {
  auto e = ghost_expand(quadratic_demo(), 41);
  auto rep = boundary_prime_density(e, DensityVariant::theorem1, std::nullopt,
                                    BigRat(1), {10.0, 20.0});
  // Qualifying primes within the scanned window, read off the verified
  // table: every prime p = 4k+1 carries e((p-1)/2, p) = +1, primes 4k+3
  // carry -1.
  CHECK(rep.member_primes == std::vector<std::uint32_t>{5, 13, 17, 29, 37});
  CHECK(rep.prime_counts.back().second == 3);   // P(20) counts {5, 13, 17}
  CHECK(rep.window_counts.back().second == 2);  // (20, 40] contains {29, 37}
  for (std::size_t i = 1; i < rep.prime_counts.size(); ++i)
    CHECK(rep.prime_counts[i].second >= rep.prime_counts[i - 1].second);
  for (const auto& [x, c] : rep.window_counts) CHECK(c >= 0);
}

TEST_CASE("density diagnostic on a terminated factor dies out") {
  auto e = ghost_expand(parse_polynomial("1 - T - p*T^2 + p*T^3"), 41);
  auto rep = boundary_prime_density(e, DensityVariant::theorem2, BigRat(0),
                                    BigRat(1), {10.0, 20.0});
  CHECK(rep.window_counts.back().second == 0);
}

TEST_CASE("density preconditions") {
  auto e = ghost_expand(quadratic_demo(), 10);
  CHECK_THROWS_AS(boundary_prime_density(e, DensityVariant::theorem2, std::nullopt,
                                         BigRat(1), {5.0}),
                  validation_error);
  CHECK_THROWS_AS(boundary_prime_density(e, DensityVariant::theorem1, std::nullopt,
                                         BigRat(1), {50.0}),
                  validation_error);
}
