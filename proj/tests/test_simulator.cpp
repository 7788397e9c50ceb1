#include <cmath>

#include "doctest.h"
#include "spottransit/simulator.hpp"

using namespace spottransit;

namespace {

SimConfig hand_config(std::uint64_t seed, double horizon = 2e4) {
  RateModel rates;
  rates.arrival.coeffs = {24.0, 0.0, -1.5};
  rates.departure.coeffs = {0.0, 0.3};
  rates.null_price = 4.0;
  SimConfig cfg;
  cfg.spec = MdpSpec::uniform(1, rates, 5);
  cfg.policy = Policy{{0.0, 4.0}};
  cfg.seed = seed;
  cfg.horizon = horizon;
  cfg.warmup = 0.05 * horizon;
  return cfg;
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("counter rng is seekable and deterministic") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 10; ++i) a.next();
    b.discard(10);
    CHECK(a.next() == b.next());
    CounterRng c(43);
    CHECK(CounterRng(42).next() != c.next());
    CounterRng u(1);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.uniform();
      CHECK((x > 0.0 && x < 1.0));
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  }

  TEST_CASE("no arrivals stays empty") {
    auto cfg = hand_config(3);
    cfg.spec.rates.arrival.coeffs = {0.0};
    const auto r = simulate_policy(cfg);
    CHECK(r.revenue_rate_estimate == 0.0);
    CHECK(r.occupancy[0] == doctest::Approx(1.0));
  }

  TEST_CASE("K=1 hand instance") {
    const auto cfg = hand_config(2024);
    const auto r = simulate_policy(cfg);
    CHECK(std::abs(r.revenue_rate_estimate - 80.0 / 21) <= 3 * r.revenue_rate_stderr);
    const auto cmp = compare_to_analytic(r, cfg.spec, cfg.policy);
    CHECK(cmp.pass);
  }

  TEST_CASE("reproducible") {
    CHECK(simulate_policy(hand_config(9)) == simulate_policy(hand_config(9)));
    CHECK_FALSE(simulate_policy(hand_config(9)) == simulate_policy(hand_config(10)));
    const auto reps = simulate_replications(hand_config(9), 4);
    const auto again = simulate_replications(hand_config(9), 4);
    CHECK(reps == again);
    CHECK_FALSE(reps[0] == reps[1]);
  }

  TEST_CASE("identical analytic inputs give zero z") {
    const auto cfg = hand_config(1);
    SimResult fake;
    fake.revenue_rate_estimate = average_revenue(cfg.spec, cfg.policy);
    fake.revenue_rate_stderr = 0.1;
    fake.occupancy = steady_state(cfg.spec, cfg.policy);
    fake.occupancy_stderr = {0.01, 0.01};
    const auto cmp = compare_to_analytic(fake, cfg.spec, cfg.policy);
    CHECK(cmp.revenue_z == 0.0);
    CHECK(cmp.occupancy_tv == 0.0);
    CHECK(cmp.pass);
  }

  TEST_CASE("wrong policy is caught") {
    auto cfg = hand_config(5);
    const auto r = simulate_policy(cfg);
    const auto cmp = compare_to_analytic(r, cfg.spec, Policy{{2.0, 4.0}});
    CHECK_FALSE(cmp.pass);
    CHECK(cmp.detail.find("MISMATCH") != std::string::npos);
  }

  TEST_CASE("doubling the horizon shrinks stderr by about sqrt 2") {
    double ratio = 0.0;
    const int reps = 8;
    for (int i = 0; i < reps; ++i) {
      const auto a = simulate_policy(hand_config(100 + i, 1e4));
      const auto b = simulate_policy(hand_config(200 + i, 2e4));
      ratio += b.revenue_rate_stderr / a.revenue_rate_stderr;
    }
    ratio /= reps;
    CHECK(std::abs(ratio / std::sqrt(0.5) - 1.0) <= 0.3);
  }
}
