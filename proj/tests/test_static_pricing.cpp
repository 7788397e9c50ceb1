#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spottransit/error.hpp"
#include "spottransit/static_pricing.hpp"

using namespace spottransit;

namespace {

MarketParams market(double r, double m, double c) {
  MarketParams mp;
  mp.cost = r;
  mp.penalty = m;
  mp.capacity = c;
  return mp;
}

const auto kFig1 = DemandSpec::iso_elastic(1313.26, 1.6);
const auto kNoise30 = UncertaintyModel::gaussian(0.0, 30.0);

}  // namespace

TEST_SUITE("static_pricing") {
  TEST_CASE("expected_profit without overflow is the risk-free margin") {
    const auto mp = market(2.0, 7.5, 300.0);
    CHECK(expected_profit(kFig1, kNoise30, mp, 5.0) == doctest::Approx(3.0 * eval_demand(kFig1, 5.0)));
    CHECK(expected_profit(kFig1, kNoise30, mp, 2.0 + 0.0) != doctest::Approx(0.0));
    const auto lin = DemandSpec::linear(100, 10);
    CHECK(expected_profit(lin, UncertaintyModel::gaussian(0, 1), market(2.0, 1.0, 200.0), 2.0) == 0.0);
  }

  TEST_CASE("expected_profit matches the quadrature oracle") {
    const auto mp = market(2.0, 7.5, 300.0);
    const auto ref = oracle::Noise::three_sigma(0.0, 30.0);
    for (double p : {2.3, 2.5, 2.7, 5.0}) {
      const double d = eval_demand(kFig1, p);
      CHECK(expected_profit(kFig1, kNoise30, mp, p) ==
            doctest::Approx(oracle::expected_profit(p, d, 2.0, 7.5, 300.0, ref)).epsilon(1e-10));
    }
    // Frozen oracle value at a price with real overflow mass.
    CHECK(expected_profit(kFig1, kNoise30, mp, 2.5) == doctest::Approx(50.2887019460).epsilon(1e-9));
  }

  TEST_CASE("profit_derivative against finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      const double alpha = 1.3 + U(rng);
      const auto d = DemandSpec::iso_elastic(1000.0 * (1 + U(rng)), alpha);
      const auto u = UncertaintyModel::gaussian(0.0, 20.0 + 20 * U(rng));
      const auto mp = market(1.0 + U(rng), 5.0 + 5 * U(rng), 250.0);
      const double p = inverse_demand(d, 250.0 + (U(rng) - 0.5) * 60.0);
      const double fd = oracle::five_point([&](double x) { return expected_profit(d, u, mp, x); }, p, 1e-4 * p);
      CHECK(oracle::rel_err(profit_derivative(d, u, mp, p), fd) <= 1e-6);
    }
    const auto lin = DemandSpec::linear(100, 10);
    const auto mp = market(2.0, 1.0, 500.0);
    const auto u = UncertaintyModel::gaussian(0, 1);
    CHECK(profit_derivative(lin, u, mp, 4.0) == doctest::Approx(60.0 - 10.0 * 2.0));
    CHECK(profit_derivative(DemandSpec::iso_elastic(1, 2), u, market(1.0, 0.0, 100.0), 2.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("optimize_price closed forms with m = 0") {
    const auto u = UncertaintyModel::gaussian(0, 1);
    CHECK(optimize_price(DemandSpec::iso_elastic(1, 2), u, market(1.0, 0.0, 100.0)).p_star ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(optimize_price(DemandSpec::linear(100, 10), u, market(2.0, 0.0, 500.0)).p_star ==
          doctest::Approx(6.0).epsilon(1e-9));
  }

  TEST_CASE("optimize_price agrees with a dense grid search") {
    const auto mp = market(2.0, 7.5, 300.0);
    const auto sol = optimize_price(kFig1, kNoise30, mp);
    const auto ref = oracle::Noise::three_sigma(0.0, 30.0);
    const double lo = 2.0, hi = 1.6 * (2.0 + 7.5) / 0.6;
    const int n = 1000000;
    const double step = (hi - lo) / (n - 1);
    double best = -INFINITY, arg = lo;
    for (int i = 0; i < n; ++i) {
      const double p = lo + step * i;
      const double v = oracle::expected_profit(p, eval_demand(kFig1, p), 2.0, 7.5, 300.0, ref, true);
      if (v > best) best = v, arg = p;
    }
    CHECK(std::abs(sol.p_star - arg) <= step);
    CHECK(sol.expected_profit == doctest::Approx(best).epsilon(1e-9));
    CHECK(sol.expected_profit == doctest::Approx(sol.risk_free_profit - sol.overflow_loss));
    CHECK(sol.elasticity_at_opt == doctest::Approx(1.6));
  }

  TEST_CASE("market validation") {
    const auto u = UncertaintyModel::gaussian(0, 30);
    CHECK_THROWS_AS(validate_market(u, market(0.0, 1.0, 300.0)), InvalidArgument);
    CHECK_THROWS_AS(validate_market(u, market(1.0, -1.0, 300.0)), InvalidArgument);
    CHECK_THROWS_AS(validate_market(u, market(1.0, 1.0, 80.0)), InvalidArgument);
    CHECK_NOTHROW(validate_market(u, market(1.0, 0.0, 300.0)));
    // Penalty below the capacity price: the solver's bracket is unbounded.
    CHECK_THROWS_AS(check_penalty_floor(kFig1, market(2.0, 2.0, 300.0)), InvalidArgument);
    CHECK_NOTHROW(check_penalty_floor(kFig1, market(2.0, 7.5, 300.0)));
  }

  TEST_CASE("regular price") {
    CHECK(regular_price(DemandSpec::iso_elastic(1, 2), 3.75) == doctest::Approx(7.5));
    CHECK(regular_price(DemandSpec::linear(100, 10), 2.0) == doctest::Approx(6.0));
    CHECK(regular_price(DemandSpec::iso_elastic(1, 2), 11.0) == doctest::Approx(22.0));
  }

  TEST_CASE("price advantage condition") {
    const auto u = UncertaintyModel::gaussian(0, 30);
    auto mp = market(2.0, 0.0, 300.0);
    mp.regular_cost = 3.75;
    mp.regular_price = 7.5;
    const auto d = DemandSpec::iso_elastic(1313.26, 2.5);
    auto sol = optimize_price(d, u, mp);
    auto adv = check_price_advantage(d, u, mp, sol);
    CHECK(adv.condition_holds);
    CHECK(adv.discount_observed);
    mp.cost = 3.75;
    mp.penalty = 7.5;
    sol = optimize_price(d, u, mp);
    adv = check_price_advantage(d, u, mp, sol);
    CHECK_FALSE(adv.condition_holds);
  }
}
