#include "spottransit/static_pricing.hpp"

#include <cmath>
#include <string>

#include "spottransit/error.hpp"

namespace spottransit {

void validate_market(const UncertaintyModel& u, const MarketParams& mp) {
  if (!(mp.cost > 0.0) || !std::isfinite(mp.cost)) throw InvalidArgument("spot cost r must be > 0");
  if (!(mp.penalty >= 0.0) || !std::isfinite(mp.penalty)) {
    throw InvalidArgument("overflow penalty m must be >= 0");
  }
  if (!(mp.capacity > 0.0) || !std::isfinite(mp.capacity)) {
    throw InvalidArgument("spot capacity C must be > 0");
  }
  if (!(u.upper() < mp.capacity)) {
    throw InvalidArgument("noise upper bound B=" + std::to_string(u.upper()) +
                          " must stay below capacity C=" + std::to_string(mp.capacity));
  }
  if (mp.regular_cost && !(*mp.regular_cost > 0.0)) throw InvalidArgument("regular cost must be > 0");
  if (mp.regular_price && !(*mp.regular_price > 0.0)) throw InvalidArgument("regular price must be > 0");
}

std::optional<double> capacity_price(const DemandSpec& d, double capacity) {
  if (d.kind() == DemandKind::kLinear && capacity >= d.base()) return std::nullopt;
  return inverse_demand(d, capacity);
}

void check_penalty_floor(const DemandSpec& d, const MarketParams& mp) {
  const auto pc = capacity_price(d, mp.capacity);
  if (pc && !(mp.penalty > *pc)) {
    throw InvalidArgument("overflow penalty m=" + std::to_string(mp.penalty) +
                          " must exceed the capacity price p^C=" + std::to_string(*pc));
  }
}

double risk_free_profit(const DemandSpec& d, const MarketParams& mp, double price) {
  return (price - mp.cost) * eval_demand(d, price);
}

double overflow_loss(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                     double price) {
  if (mp.penalty == 0.0) return 0.0;
  return mp.penalty * partial_overshoot(u, mp.capacity - eval_demand(d, price));
}

double expected_profit(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                       double price) {
  return risk_free_profit(d, mp, price) - overflow_loss(d, u, mp, price);
}

double profit_derivative(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                         double price) {
  const double q = eval_demand(d, price);
  const double slope = eval_slope(d, price);
  const double tail = tail_probability(u, mp.capacity - q);
  return q + slope * (price - mp.cost - mp.penalty * tail);
}

double price_search_ceiling(const DemandSpec& d, const MarketParams& mp) {
  if (d.kind() == DemandKind::kLinear) return d.max_price();
  const double a = d.alpha();
  return a * (mp.cost + mp.penalty) / (a - 1.0);
}

namespace {

StaticSolution make_solution(const DemandSpec& d, const UncertaintyModel& u,
                             const MarketParams& mp, double p) {
  StaticSolution s;
  s.p_star = p;
  s.risk_free_profit = risk_free_profit(d, mp, p);
  s.overflow_loss = overflow_loss(d, u, mp, p);
  s.expected_profit = s.risk_free_profit - s.overflow_loss;
  s.overflow_probability = tail_probability(u, mp.capacity - eval_demand(d, p));
  s.elasticity_at_opt = elasticity(d, p);
  return s;
}

double golden_section_max(const DemandSpec& d, const UncertaintyModel& u, const MarketParams& mp,
                          double lo, double hi, const SolverOptions& opts) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = expected_profit(d, u, mp, x1);
  double f2 = expected_profit(d, u, mp, x2);
  for (int i = 0; i < opts.max_iterations && hi - lo > opts.price_tolerance; ++i) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = expected_profit(d, u, mp, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = expected_profit(d, u, mp, x2);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace

StaticSolution optimize_price(const DemandSpec& d, const UncertaintyModel& u,
                              const MarketParams& mp, const SolverOptions& opts) {
  validate_market(u, mp);
  double lo = mp.cost * (1.0 + 1e-6);
  double hi = price_search_ceiling(d, mp);
  if (d.kind() == DemandKind::kIsoElastic) hi *= 1.0 + 1e-6;
  if (!(lo < hi) || !d.in_domain(lo)) {
    throw NoSolution("no price above cost r=" + std::to_string(mp.cost) + " inside the demand domain");
  }

  const double f_lo = profit_derivative(d, u, mp, lo);
  const double f_hi = profit_derivative(d, u, mp, hi);
  if (f_lo <= 0.0) {
    return make_solution(d, u, mp, golden_section_max(d, u, mp, lo, hi, opts));
  }
  if (f_hi > 0.0) {
    throw NoSolution("profit derivative positive across the whole bracket [" + std::to_string(lo) +
                     ", " + std::to_string(hi) + "]; parameters are degenerate");
  }

  double best = lo;
  double best_residual = std::abs(f_lo);
  for (int i = 0; i < opts.max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = profit_derivative(d, u, mp, mid);
    if (std::abs(fm) < best_residual) {
      best = mid;
      best_residual = std::abs(fm);
    }
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= opts.price_tolerance * std::max(1.0, mid) &&
        best_residual <= opts.residual_tolerance) {
      break;
    }
  }
  return make_solution(d, u, mp, best);
}

double regular_price(const DemandSpec& aggregate, double regular_cost) {
  if (!(regular_cost > 0.0)) throw InvalidArgument("regular cost must be > 0");
  double p = 0.0;
  if (aggregate.kind() == DemandKind::kIsoElastic) {
    p = regular_cost / (1.0 - 1.0 / aggregate.alpha());
  } else {
    if (!(regular_cost < aggregate.max_price())) {
      throw NoSolution("regular cost at or above the linear choke price");
    }
    p = 0.5 * (regular_cost + aggregate.max_price());
  }
  if (!(elasticity(aggregate, p) > 1.0)) {
    throw NoSolution("aggregate elasticity at the regular price is not above 1");
  }
  return p;
}

PriceAdvantage check_price_advantage(const DemandSpec& d, const UncertaintyModel& u,
                                     const MarketParams& mp, const StaticSolution& sol) {
  if (!mp.regular_cost || !mp.regular_price) {
    throw InvalidArgument("price-advantage check needs the regular cost and regular price");
  }
  const double sigma = elasticity(d, sol.p_star);
  const double t = mp.capacity - eval_demand(d, sol.p_star);
  // Outside t > mean the one-sided bound degenerates to the trivial bound 1.
  const double a = t > u.mean() ? cantelli_bound(u, t) : 1.0;
  PriceAdvantage out;
  out.tail_bound = a;
  out.bound_value = *mp.regular_cost - mp.penalty * (1.0 - 1.0 / sigma) * a;
  out.condition_holds = mp.cost <= out.bound_value;
  out.discount_observed = sol.p_star < *mp.regular_price;
  return out;
}

}  // namespace spottransit
