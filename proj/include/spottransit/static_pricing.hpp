#pragma once

#include <optional>

#include "spottransit/demand.hpp"
#include "spottransit/uncertainty.hpp"

namespace spottransit {

struct MarketParams {
  double cost = 0.0;      // r, spot provision cost $/Mbps
  double penalty = 0.0;   // m, overflow penalty $/Mbps
  double capacity = 0.0;  // C, spot capacity Gbps
  std::optional<double> regular_cost;   // r-bar
  std::optional<double> regular_price;  // p-bar
};

/// Checks r > 0, m >= 0, C > 0 and that the noise support stays below C.
/// m = 0 is accepted so the risk-free reference price can be solved.
void validate_market(const UncertaintyModel& u, const MarketParams& mp);

/// p^C, the price at which d(p) = C; empty when C is not reachable.
std::optional<double> capacity_price(const DemandSpec& d, double capacity);

/// Requires m > p^C (vacuous when p^C does not exist). Throws InvalidArgument.
void check_penalty_floor(const DemandSpec& d, const MarketParams& mp);

struct StaticSolution {
  double p_star = 0.0;
  double expected_profit = 0.0;
  double risk_free_profit = 0.0;  // Phi(p*) = (p* - r) d(p*)
  double overflow_loss = 0.0;     // Lambda(p*)
  double overflow_probability = 0.0;
  double elasticity_at_opt = 0.0;
};

struct SolverOptions {
  double price_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
  int max_iterations = 400;
};

/// E[R(p)] = (p - r) d(p) - m E[(eps - (C - d(p)))^+].
double expected_profit(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                       double price);
double risk_free_profit(const DemandSpec& d, const MarketParams& mp, double price);
double overflow_loss(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                     double price);

/// d/dp E[R(p)] = d(p) + d'(p) (p - r - m Pr(eps > C - d(p))).
double profit_derivative(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                         double price);

/// Upper end of the search bracket: alpha (r + m) / (alpha - 1) for
/// iso-elastic demand, v / alpha for linear demand.
double price_search_ceiling(const DemandSpec& d, const MarketParams& mp);

/// Unique maximizer of the expected profit (quasiconcave objective). Bisects a
/// sign change of the derivative; falls back to golden-section search when the
/// derivative is non-positive across the whole bracket.
StaticSolution optimize_price(const DemandSpec& d, const UncertaintyModel& u,
                              const MarketParams& mp, const SolverOptions& opts = {});

/// Profit-maximizing regular price for the aggregate demand curve at cost r-bar.
double regular_price(const DemandSpec& aggregate, double regular_cost);

struct PriceAdvantage {
  bool condition_holds = false;   // sufficient condition for p* < p-bar
  bool discount_observed = false; // p* < p-bar
  double bound_value = 0.0;       // right-hand side r-bar - m (1 - 1/sigma) a
  double tail_bound = 0.0;        // the Cantelli term a
};

PriceAdvantage check_price_advantage(const DemandSpec& d, const UncertaintyModel& u,
                                     const MarketParams& mp, const StaticSolution& sol);

}  // namespace spottransit
