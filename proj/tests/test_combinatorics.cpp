#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "partsim/combinatorics.hpp"
#include "partsim/numerics.hpp"

using namespace partsim;

TEST_CASE("exact Stirling and Bell tables match the classical values") {
  Combinatorics c(10);
  CHECK(c.stirling2_exact(0, 0) == 1);
  CHECK(c.stirling2_exact(4, 2) == 7);
  CHECK(c.stirling2_exact(5, 2) == 15);
  CHECK(c.stirling2_exact(5, 3) == 25);
  CHECK(c.stirling2_exact(7, 3) == 301);
  CHECK(c.stirling2_exact(10, 10) == 1);
  CHECK(c.stirling2_exact(3, 5) == 0);  // k > n
  CHECK(c.bell_exact(0) == 1);
  CHECK(c.bell_exact(4) == 15);
  CHECK(c.bell_exact(5) == 52);
  CHECK(c.bell_exact(10) == 115975);
}

TEST_CASE("log tables agree with the exact values up to the exact threshold") {
  Combinatorics c(64);
  for (std::uint64_t n = 1; n <= 64; ++n) {
    for (std::uint64_t k = 1; k <= n; ++k) {
      double expected = static_cast<double>(log(HighFloat(c.stirling2_exact(n, k))));
      CHECK(c.log_stirling2(n, k) == doctest::Approx(expected).epsilon(1e-14));
    }
    double eb = static_cast<double>(log(HighFloat(c.bell_exact(n))));
    CHECK(c.log_bell(n) == doctest::Approx(eb).epsilon(1e-14));
  }
  CHECK(c.log_stirling2(5, 0) == neg_inf);
  CHECK(c.log_stirling2(3, 4) == neg_inf);
}

TEST_CASE("extended log rows satisfy the Bell recurrence B(n+1) = sum C(n,j) B(j)") {
  Combinatorics c(200);
  for (std::uint64_t n : {64ull, 100ull, 150ull, 199ull}) {
    double acc = neg_inf;
    for (std::uint64_t j = 0; j <= n; ++j)
      acc = log_add_exp(acc, Combinatorics::log_binomial(n, j) + c.log_bell(j));
    CHECK(c.log_bell(n + 1) == doctest::Approx(acc).epsilon(1e-10));
  }
}

TEST_CASE("deletion ratios") {
  Combinatorics c(10);
  CHECK(c.stirling_ratio(4, 2) == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
  CHECK(c.stirling_ratio(5, 5) == 0.0);
  CHECK(c.stirling_ratio(7, 1) == 1.0);
  CHECK_THROWS_AS(c.stirling_ratio(4, 5), std::domain_error);
  CHECK_THROWS_AS(c.stirling_ratio(4, 0), std::domain_error);
  CHECK(c.bell_ratio(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(c.bell_ratio(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.bell_ratio(5) == doctest::Approx(15.0 / 52.0).epsilon(1e-14));
}

TEST_CASE("a column cap bounds the table without touching fixed-K queries") {
  Combinatorics c(100, 5);
  Combinatorics full(100);
  CHECK(c.capped());
  CHECK(c.log_stirling2(100, 5) == doctest::Approx(full.log_stirling2(100, 5)).epsilon(1e-12));
  CHECK(c.log_stirling2(3, 4) == neg_inf);  // k > n short-circuits before the cap
  CHECK_THROWS_AS(c.log_stirling2(100, 6), std::domain_error);
  CHECK_THROWS_AS(c.log_bell(10), std::domain_error);
  CHECK_THROWS_AS(c.bell_exact(4), std::domain_error);
}

TEST_CASE("table bounds are enforced") {
  Combinatorics c(70);
  CHECK_THROWS_AS(c.log_stirling2(71, 3), std::domain_error);
  CHECK_THROWS_AS(c.stirling2_exact(70, 3), std::domain_error);  // beyond exact rows
  CHECK(std::isfinite(c.log_stirling2(70, 3)));
}

TEST_CASE("binomials: exact vs lgamma route") {
  CHECK(Combinatorics::binomial_exact(5, 2) == 10);
  CHECK(Combinatorics::binomial_exact(50, 25) == BigInt("126410606437752"));
  CHECK(Combinatorics::binomial_exact(4, 9) == 0);
  for (std::uint64_t n : {10ull, 30ull, 50ull, 64ull}) {
    for (std::uint64_t k = 0; k <= n; ++k) {
      double expected = static_cast<double>(log(HighFloat(Combinatorics::binomial_exact(n, k))));
      CHECK(Combinatorics::log_binomial(n, k) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK(Combinatorics::log_binomial(3, 7) == neg_inf);
}

TEST_CASE("hypergeometric pmf sums to one and matches the binomial form") {
  for (auto [N, a, b] : {std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>{20, 7, 11},
                         {9, 3, 9},
                         {12, 8, 8},
                         {5, 5, 2}}) {
    double total = 0.0;
    std::uint64_t lo = a + b > N ? a + b - N : 0;
    for (std::uint64_t m = lo; m <= std::min(a, b); ++m) {
      double direct =
          static_cast<double>(Combinatorics::binomial_exact(b, m) *
                              Combinatorics::binomial_exact(N - b, a - m)) /
          static_cast<double>(Combinatorics::binomial_exact(N, a));
      CHECK(Combinatorics::hypergeom_pmf(m, N, a, b) == doctest::Approx(direct).epsilon(1e-12));
      total += Combinatorics::hypergeom_pmf(m, N, a, b);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    if (lo > 0) CHECK(Combinatorics::hypergeom_pmf(lo - 1, N, a, b) == 0.0);
    CHECK(Combinatorics::hypergeom_pmf(std::min(a, b) + 1, N, a, b) == 0.0);
  }
  CHECK_THROWS_AS(Combinatorics::hypergeom_pmf(0, 4, 5, 2), std::domain_error);
}

TEST_CASE("the pmf scan reproduces every support point") {
  for (auto [N, a, b] : {std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>{20, 7, 11},
                         {9, 3, 9},
                         {30, 18, 25}}) {
    std::uint64_t expected_lo = a + b > N ? a + b - N : 0;
    std::uint64_t seen = 0;
    for (HypergeomScan sc(N, a, b); !sc.done(); sc.advance()) {
      if (seen == 0) CHECK(sc.overlap() == expected_lo);
      CHECK(sc.pmf() ==
            doctest::Approx(Combinatorics::hypergeom_pmf(sc.overlap(), N, a, b)).epsilon(1e-11));
      ++seen;
    }
    CHECK(seen == std::min(a, b) - expected_lo + 1);
  }
}
