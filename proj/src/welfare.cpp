#include "spottransit/welfare.hpp"

#include <cmath>
#include <string>

#include "spottransit/error.hpp"

namespace spottransit {

bool surplus_defined(const DemandSpec& d) noexcept {
  return d.kind() == DemandKind::kLinear || d.alpha() > 2.0;
}

double consumer_surplus(const DemandSpec& d, double price) {
  if (!surplus_defined(d)) {
    throw DomainError("consumer surplus diverges for iso-elastic demand with alpha=" +
                      std::to_string(d.alpha()) + " <= 2");
  }
  if (!d.in_domain(price)) throw DomainError("surplus price outside demand domain");
  const double v = d.base();
  const double a = d.alpha();
  if (d.kind() == DemandKind::kIsoElastic) {
    return v * std::pow(price, 2.0 - a) / ((a - 1.0) * (a - 2.0));
  }
  const double gap = v / a - price;
  return a * gap * gap * gap / 6.0;
}

double baseline_profit(const DemandSpec& d, double regular_price, double regular_cost) {
  return (regular_price - regular_cost) * eval_demand(d, regular_price);
}

double social_welfare(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                      double price) {
  return consumer_surplus(d, price) + expected_profit(d, u, mp, price);
}

namespace {

double improvement_pct(double spot, double regular) {
  if (regular == 0.0) return spot == 0.0 ? 0.0 : std::copysign(INFINITY, spot);
  return 100.0 * (spot - regular) / std::abs(regular);
}

}  // namespace

WelfareReport welfare_report(const DemandSpec& d, const UncertaintyModel& /*u*/,
                             const MarketParams& mp, const StaticSolution& sol) {
  if (!mp.regular_cost || !mp.regular_price) {
    throw InvalidArgument("welfare report needs the regular cost and regular price");
  }
  const double pbar = *mp.regular_price;
  const double rbar = *mp.regular_cost;

  WelfareReport w;
  w.surplus_spot = consumer_surplus(d, sol.p_star);
  w.surplus_regular = consumer_surplus(d, pbar);
  w.profit_spot = sol.expected_profit;
  w.profit_regular = baseline_profit(d, pbar, rbar);
  w.profit_regular_at_spot_cost = baseline_profit(d, pbar, mp.cost);
  w.welfare_spot = w.surplus_spot + w.profit_spot;
  w.welfare_regular = w.surplus_regular + w.profit_regular;
  w.profit_gain_abs = w.profit_spot - w.profit_regular;
  w.surplus_gain_abs = w.surplus_spot - w.surplus_regular;
  w.profit_improvement_pct = improvement_pct(w.profit_spot, w.profit_regular);
  w.surplus_improvement_pct = improvement_pct(w.surplus_spot, w.surplus_regular);

  if (sol.p_star < pbar) {
    if (!(w.surplus_spot > w.surplus_regular)) {
      throw InvariantViolation("spot price below regular price but surplus did not improve");
    }
    if (!(w.profit_spot > w.profit_regular)) {
      throw InvariantViolation("spot price below regular price but profit did not improve (p*=" +
                               std::to_string(sol.p_star) + ", p-bar=" + std::to_string(pbar) + ")");
    }
  }
  return w;
}

}  // namespace spottransit
