#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "pnrthresh/errors.hpp"
#include "pnrthresh/photon_stats.hpp"

using namespace pnrthresh;

namespace {
const std::vector<double> kMeans{0.0, 0.5, 1.0, 3.0, 10.0};
}

TEST_CASE("SourceParams derives the thermal ratio") {
  const SourceParams p(2.0, 3.0);
  CHECK(p.x() == 3.0 / 4.0);
  CHECK(SourceParams(1.0, 0.0).x() == 0.0);
  for (double nth : {1e-9, 1.0, 1e3, 1e12}) {
    const SourceParams q(0.0, nth);
    CHECK(q.x() > 0.0);
    CHECK(q.x() < 1.0);
  }
  CHECK_THROWS_AS(SourceParams(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SourceParams(1.0, -0.5), DomainError);
  CHECK_THROWS_AS(SourceParams(1.0, INFINITY), DomainError);
  CHECK_THROWS_AS(SourceParams(NAN, 1.0), DomainError);
}

TEST_CASE("thermal_pmf") {
  CHECK(thermal_pmf(0, 1.0) == 0.5);
  CHECK(thermal_pmf(2, 0.0) == 0.0);
  CHECK(thermal_pmf(0, 0.0) == 1.0);
  CHECK(thermal_pmf(2, 1.0) == 0.125);
  CHECK_THROWS_AS(thermal_pmf(1, -1.0), DomainError);
  CHECK_THROWS_AS(thermal_pmf(1, NAN), DomainError);
  // No overflow of n_th^n for large n.
  CHECK(thermal_pmf(5000, 100.0) == doctest::Approx(double(oracle::thermal(5000, 100.0))));
}

TEST_CASE("poisson_pmf") {
  CHECK(poisson_pmf(0, 0.0) == 1.0);
  CHECK(poisson_pmf(3, 0.0) == 0.0);
  CHECK(poisson_pmf(0, 1.0) == doctest::Approx(0.367879441171).epsilon(1e-12));
  CHECK(poisson_pmf(3, 3.0) == doctest::Approx(poisson_pmf(2, 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(poisson_pmf(0, -0.1), DomainError);

  SUBCASE("both evaluation regimes agree with the oracle") {
    for (double mean : {0.5, 10.0, 29.0, 31.0, 200.0, 1000.0}) {
      for (std::uint32_t n : {0u, 1u, 5u, 29u, 31u, 100u, 1000u, 1100u}) {
        const double want = double(oracle::poisson(n, mean));
        if (want < 1e-300) continue;
        CHECK(poisson_pmf(n, mean) == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("incomplete_gamma_ratio") {
  CHECK(incomplete_gamma_ratio(0.0, 5) == 1.0);
  CHECK(incomplete_gamma_ratio(1.0, 2) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(incomplete_gamma_ratio(1e4, 3) == 0.0);
  CHECK(incomplete_gamma_ratio(800.0, 10) < 1e-300);
  CHECK_THROWS_AS(incomplete_gamma_ratio(INFINITY, 2), DomainError);
  CHECK_THROWS_AS(incomplete_gamma_ratio(NAN, 2), DomainError);
  CHECK_THROWS_AS(incomplete_gamma_ratio(1.0, 0), DomainError);

  SUBCASE("matches the defining sum") {
    for (double y : {0.1, 1.0, 7.5, 29.0, 45.0}) {
      for (std::uint32_t k : {1u, 2u, 5u, 20u}) {
        CHECK(incomplete_gamma_ratio(y, k) ==
              doctest::Approx(double(oracle::gamma_ratio(y, k))).epsilon(1e-12));
      }
    }
  }

  SUBCASE("monotone in y and k, in [0, 1]") {
    std::vector<double> ys;
    for (int i = 0; i <= 60; ++i) ys.push_back(0.25 * i);
    for (std::uint32_t k = 1; k <= 15; ++k) {
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double v = incomplete_gamma_ratio(ys[i], k);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-15);
        // Strict where the exact step is visible in double precision.
        if (i > 0) {
          const double prev = incomplete_gamma_ratio(ys[i - 1], k);
          CHECK(v <= prev);
          if (oracle::gamma_ratio(ys[i - 1], k) - oracle::gamma_ratio(ys[i], k) > 1e-13) {
            CHECK(v < prev);
          }
        }
        if (ys[i] > 0.0) {
          const double next = incomplete_gamma_ratio(ys[i], k + 1);
          CHECK(next >= v);
          if (oracle::gamma_ratio(ys[i], k + 1) - oracle::gamma_ratio(ys[i], k) > 1e-13) {
            CHECK(next > v);
          }
        }
      }
    }
  }
}

TEST_CASE("mixed_pmf") {
  SUBCASE("limits") {
    for (std::uint32_t n = 0; n < 10; ++n) {
      CHECK(mixed_pmf(n, SourceParams(0.0, 1.0)) == doctest::Approx(thermal_pmf(n, 1.0)));
      CHECK(mixed_pmf(n, SourceParams(2.5, 0.0)) == poisson_pmf(n, 2.5));
    }
  }
  SUBCASE("single convolution term at n = 0") {
    CHECK(mixed_pmf(0, SourceParams(1.0, 1.0)) ==
          doctest::Approx(std::exp(-1.0) * 0.5).epsilon(1e-15));
  }
  SUBCASE("explicit convolution at n = 4") {
    const double want = double(oracle::mixed(4, 2.0, 1.0));
    CHECK(std::fabs(mixed_pmf(4, SourceParams(2.0, 1.0)) - want) < 1e-14);
  }
  SUBCASE("convolution identity on the grid, n <= 60") {
    for (double np : kMeans) {
      for (double nth : kMeans) {
        const SourceParams p(np, nth);
        for (std::uint32_t n = 0; n <= 60; ++n) {
          CHECK(std::fabs(mixed_pmf(n, p) - double(oracle::mixed(n, np, nth))) <= 1e-10);
        }
      }
    }
  }
  SUBCASE("large signal does not overflow") {
    const SourceParams p(800.0, 0.5);
    const double v = mixed_pmf(800, p);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(double(oracle::mixed(800, 800.0, 0.5))).epsilon(1e-9));
  }
}

TEST_CASE("build_pmf") {
  SUBCASE("vacuum") {
    const auto pmf = build_pmf(SourceKind::Thermal, SourceParams(0.0, 0.0), 1e-12);
    CHECK(pmf.probs == std::vector<double>{1.0});
    CHECK(pmf.residual == 0.0);
  }
  SUBCASE("geometric tail sets the truncation") {
    const auto pmf = build_pmf(SourceKind::Thermal, SourceParams(0.0, 1.0), 1e-12);
    // residual = 2^-(n_max+1) <= 1e-12 first holds at n_max = 39.
    CHECK(pmf.n_max() == 39);
    CHECK(pmf.residual == std::ldexp(1.0, -40));
  }
  SUBCASE("poisson mass") {
    const auto pmf = build_pmf(SourceKind::Poisson, SourceParams(10.0, 0.0), 1e-12);
    const double total = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
    CHECK(total >= 1.0 - 1e-12);
    CHECK(pmf.residual <= 1e-12);
  }
  SUBCASE("normalization on the grid") {
    for (auto kind : {SourceKind::Thermal, SourceKind::Poisson, SourceKind::Mixed}) {
      for (double np : kMeans) {
        for (double nth : kMeans) {
          const auto pmf = build_pmf(kind, SourceParams(np, nth));
          const double total = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
          CHECK(std::fabs(total + pmf.residual - 1.0) <= 1e-12);
          CHECK(pmf.residual <= kTruncationTolerance);
          for (double pr : pmf.probs) {
            CHECK(pr >= 0.0);
            CHECK(pr <= 1.0);
          }
          // Smallest truncation: one fewer term would leave too much mass.
          if (pmf.n_max() > 0) CHECK(pmf.residual + pmf.probs.back() > kTruncationTolerance);
        }
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_pmf(SourceKind::Thermal, SourceParams(0.0, 1.0), 0.0), DomainError);
    CHECK_THROWS_AS(build_pmf(SourceKind::Thermal, SourceParams(0.0, 1.0), 1.0), DomainError);
    // Cap 10*100 + 200 = 1200 terms leaves x^1201 ~ 6e-6 of thermal mass.
    CHECK_THROWS_AS(build_pmf(SourceKind::Thermal, SourceParams(0.0, 100.0), 1e-12), SearchError);
  }
}

TEST_CASE("thermal_tail") {
  CHECK(thermal_tail(2, 1.0) == 0.25);
  CHECK(thermal_tail(1, 0.0) == 0.0);
  CHECK_THROWS_AS(thermal_tail(0, 1.0), DomainError);
  for (double nth : kMeans) {
    for (std::uint32_t big_n = 1; big_n <= 10; ++big_n) {
      double below = 0.0;
      for (std::uint32_t n = 0; n < big_n; ++n) below += thermal_pmf(n, nth);
      CHECK(std::fabs(thermal_tail(big_n, nth) - (1.0 - below)) <= 1e-12);
    }
  }
}

TEST_CASE("mixed_tail") {
  for (std::uint32_t big_n = 1; big_n <= 6; ++big_n) {
    CHECK(mixed_tail(big_n, SourceParams(0.0, 1.0)) == std::pow(0.5, big_n));
  }
  CHECK(mixed_tail(1, SourceParams(1.0, 1.0)) ==
        doctest::Approx(1.0 - 0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(mixed_tail(1, SourceParams(1.0, 1.0)) == doctest::Approx(0.816060).epsilon(1e-6));
  {
    const SourceParams p(10.0, 1.0);
    double below = 0.0;
    for (std::uint32_t n = 0; n < 5; ++n) below += mixed_pmf(n, p);
    CHECK(std::fabs(mixed_tail(5, p) - (1.0 - below)) <= 1e-10);
  }
  CHECK(mixed_tail(3, SourceParams(2.0, 0.0)) == doctest::Approx(poisson_tail(3, 2.0)));
  CHECK_THROWS_AS(mixed_tail(0, SourceParams(1.0, 1.0)), DomainError);

  SUBCASE("complement identity on the grid, N = 1..10") {
    for (double np : kMeans) {
      for (double nth : kMeans) {
        const SourceParams p(np, nth);
        double below = 0.0;
        for (std::uint32_t big_n = 1; big_n <= 10; ++big_n) {
          below += mixed_pmf(big_n - 1, p);
          CHECK(std::fabs(mixed_tail(big_n, p) - (1.0 - below)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("poisson_tail sums on the stable side") {
  CHECK(poisson_tail(0, 3.0) == 1.0);
  CHECK(poisson_tail(4, 0.0) == 0.0);
  // Deep tail where 1 - lower sum would round to zero.
  const double want = double(oracle::mixed_tail(40, 1.0, 0.0));
  CHECK(poisson_tail(40, 1.0) == doctest::Approx(want).epsilon(1e-12));
  CHECK(poisson_tail(40, 1.0) > 0.0);
}

TEST_CASE("source kind names") {
  for (auto k : {SourceKind::Thermal, SourceKind::Poisson, SourceKind::Mixed}) {
    CHECK(parse_source_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_source_kind("laser"), DomainError);
}
