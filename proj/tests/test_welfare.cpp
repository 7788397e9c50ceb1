#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spottransit/error.hpp"
#include "spottransit/welfare.hpp"

using namespace spottransit;

TEST_SUITE("welfare") {
  TEST_CASE("consumer surplus closed forms against quadrature") {
    const auto lin = DemandSpec::linear(100, 10);
    CHECK(consumer_surplus(lin, 10.0) == 0.0);
    CHECK(consumer_surplus(lin, 5.0) == doctest::Approx(1250.0 / 6.0));
    CHECK(consumer_surplus(lin, 5.0) ==
          doctest::Approx(oracle::surplus([&](double x) { return eval_demand(lin, x); }, 5.0, 10.0)).epsilon(1e-12));

    const auto iso = DemandSpec::iso_elastic(8, 3);
    CHECK(consumer_surplus(iso, 2.0) == doctest::Approx(2.0));
    for (double alpha : {2.5, 3.0, 4.2}) {
      const auto d = DemandSpec::iso_elastic(1313.26, alpha);
      const double q = oracle::surplus([&](double x) { return eval_demand(d, x); }, 3.0, INFINITY);
      CHECK(oracle::rel_err(consumer_surplus(d, 3.0), q) <= 1e-6);
    }
    // The improper integral diverges for alpha <= 2.
    CHECK_FALSE(surplus_defined(DemandSpec::iso_elastic(1, 1.8)));
    CHECK_THROWS_AS(consumer_surplus(DemandSpec::iso_elastic(1, 1.8), 1.0), DomainError);
  }

  TEST_CASE("baseline profit") {
    CHECK(baseline_profit(DemandSpec::linear(100, 10), 6.0, 2.0) == doctest::Approx(160.0));
    CHECK(std::abs(baseline_profit(DemandSpec::iso_elastic(1313.26, 1.6), 5.0, 2.5) - 250.0) <= 0.3);
    CHECK(baseline_profit(DemandSpec::linear(100, 10), 2.0, 2.0) == 0.0);
  }

  TEST_CASE("social welfare is additive") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      const auto d = DemandSpec::iso_elastic(5000 * (1 + U(rng)), 2.2 + U(rng));
      const auto u = UncertaintyModel::gaussian(-5.0, 20.0 + 10 * U(rng));
      MarketParams mp;
      mp.cost = 1.0 + U(rng);
      mp.penalty = 6.0;
      mp.capacity = 400.0;
      const double p = 3.0 + 2 * U(rng);
      CHECK(social_welfare(d, u, mp, p) ==
            doctest::Approx(consumer_surplus(d, p) + expected_profit(d, u, mp, p)).epsilon(1e-12));
    }
    const auto lin = DemandSpec::linear(100, 10);
    MarketParams mp;
    mp.cost = 2.0;
    mp.penalty = 1.0;
    mp.capacity = 500.0;
    const auto u = UncertaintyModel::gaussian(0, 1);
    CHECK(social_welfare(lin, u, mp, 10.0) == doctest::Approx(expected_profit(lin, u, mp, 10.0)));
    CHECK(social_welfare(lin, u, mp, 1.0) == doctest::Approx(consumer_surplus(lin, 1.0) - 1.0 * 90.0));
  }

  TEST_CASE("welfare report") {
    const auto d = DemandSpec::linear(100, 10);
    const auto u = UncertaintyModel::gaussian(0, 1);
    MarketParams mp;
    mp.cost = 1.0;
    mp.penalty = 8.0;
    mp.capacity = 500.0;
    mp.regular_cost = 2.0;
    mp.regular_price = 6.0;
    const auto sol = optimize_price(d, u, mp);
    const auto w = welfare_report(d, u, mp, sol);
    CHECK(sol.p_star == doctest::Approx(5.5));
    CHECK(w.profit_regular == doctest::Approx(160.0));
    CHECK(w.profit_spot == doctest::Approx(4.5 * 45.0));
    CHECK(w.profit_improvement_pct == doctest::Approx(100.0 * (202.5 - 160.0) / 160.0));
    CHECK(w.surplus_improvement_pct > 0.0);
    CHECK(w.welfare_spot == doctest::Approx(w.surplus_spot + w.profit_spot).epsilon(1e-12));

    // Forced p* = p-bar with identical cost: zero improvements.
    mp.cost = 2.0;
    StaticSolution forced;
    forced.p_star = 6.0;
    forced.expected_profit = expected_profit(d, u, mp, 6.0);
    const auto z = welfare_report(d, u, mp, forced);
    CHECK(z.profit_improvement_pct == doctest::Approx(0.0));
    CHECK(z.surplus_improvement_pct == doctest::Approx(0.0));
  }
}
