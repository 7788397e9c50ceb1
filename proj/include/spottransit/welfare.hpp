#pragma once

#include "spottransit/demand.hpp"
#include "spottransit/static_pricing.hpp"
#include "spottransit/uncertainty.hpp"

namespace spottransit {

/// S(p) = integral from p to the choke price of (x - p) d(x) dx.
/// Iso-elastic curves need alpha > 2 for the integral to converge.
double consumer_surplus(const DemandSpec& d, double price);

/// True when consumer_surplus is finite for this curve.
bool surplus_defined(const DemandSpec& d) noexcept;

/// Profit from the same demand served at the regular price: (p - r) d(p).
double baseline_profit(const DemandSpec& d, double regular_price, double regular_cost);

/// Psi(p) = S(p) + E[R(p)].
double social_welfare(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                      double price);

struct WelfareReport {
  double surplus_spot = 0.0;
  double surplus_regular = 0.0;
  double profit_spot = 0.0;
  double profit_regular = 0.0;  // (p-bar - r-bar) d(p-bar)
  /// (p-bar - r) d(p-bar): the same baseline priced at the spot cost.
  double profit_regular_at_spot_cost = 0.0;
  double welfare_spot = 0.0;
  double welfare_regular = 0.0;
  double profit_improvement_pct = 0.0;
  double surplus_improvement_pct = 0.0;
  double profit_gain_abs = 0.0;
  double surplus_gain_abs = 0.0;
};

/// Compares the spot optimum against regular pricing of the same demand.
/// Throws InvariantViolation if p* < p-bar but surplus or profit fail to
/// improve.
WelfareReport welfare_report(const DemandSpec& d, const UncertaintyModel& u,
                             const MarketParams& mp, const StaticSolution& sol);

}  // namespace spottransit
