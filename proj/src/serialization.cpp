#include "spottransit/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "spottransit/error.hpp"

namespace spottransit {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<double> number_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(std::string("field '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw ParseError(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Json to_json(const DemandSpec& d) {
  return {{"kind", std::string(to_string(d.kind()))}, {"v", d.base()}, {"alpha", d.alpha()}};
}

DemandSpec demand_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("demand spec must be a JSON object");
  const auto kind = parse_demand_kind(j.value("kind", std::string{}));
  const double v = number(j, "v");
  const double a = number(j, "alpha");
  return kind == DemandKind::kIsoElastic ? DemandSpec::iso_elastic(v, a) : DemandSpec::linear(v, a);
}

Json to_json(const UncertaintyModel& u) {
  return {{"mu", u.mean()}, {"theta", u.sd()}, {"a", u.lower()}, {"b", u.upper()}};
}

UncertaintyModel uncertainty_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("uncertainty model must be a JSON object");
  const double mu = number(j, "mu");
  const double theta = number(j, "theta");
  if (j.contains("a") != j.contains("b")) throw ParseError("give both 'a' and 'b' or neither");
  if (!j.contains("a")) return UncertaintyModel::gaussian(mu, theta);
  return UncertaintyModel::truncated(mu, theta, number(j, "a"), number(j, "b"));
}

Json to_json(const MarketParams& mp) {
  return {{"r", mp.cost},
          {"m", mp.penalty},
          {"C", mp.capacity},
          {"r_bar", optional_number(mp.regular_cost)},
          {"p_bar", optional_number(mp.regular_price)}};
}

MarketParams market_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("market parameters must be a JSON object");
  MarketParams mp;
  mp.cost = number(j, "r");
  mp.penalty = number(j, "m");
  mp.capacity = number(j, "C");
  if (j.contains("r_bar") && !j.at("r_bar").is_null()) mp.regular_cost = number(j, "r_bar");
  if (j.contains("p_bar") && !j.at("p_bar").is_null()) mp.regular_price = number(j, "p_bar");
  return mp;
}

Json to_json(const StaticSolution& s) {
  return {{"p_star", s.p_star},
          {"expected_profit", s.expected_profit},
          {"risk_free_profit", s.risk_free_profit},
          {"overflow_loss", s.overflow_loss},
          {"overflow_probability", s.overflow_probability},
          {"elasticity_at_opt", s.elasticity_at_opt}};
}

StaticSolution static_solution_from_json(const Json& j) {
  StaticSolution s;
  s.p_star = number(j, "p_star");
  s.expected_profit = number(j, "expected_profit");
  s.risk_free_profit = number(j, "risk_free_profit");
  s.overflow_loss = number(j, "overflow_loss");
  s.overflow_probability = number(j, "overflow_probability");
  s.elasticity_at_opt = number(j, "elasticity_at_opt");
  return s;
}

Json to_json(const WelfareReport& w) {
  return {{"surplus_spot", w.surplus_spot},
          {"surplus_regular", w.surplus_regular},
          {"profit_spot", w.profit_spot},
          {"profit_regular", w.profit_regular},
          {"profit_regular_at_spot_cost", w.profit_regular_at_spot_cost},
          {"welfare_spot", w.welfare_spot},
          {"welfare_regular", w.welfare_regular},
          {"profit_improvement_pct", w.profit_improvement_pct},
          {"surplus_improvement_pct", w.surplus_improvement_pct},
          {"profit_gain_abs", w.profit_gain_abs},
          {"surplus_gain_abs", w.surplus_gain_abs}};
}

Json to_json(const PriceAdvantage& a) {
  return {{"condition_holds", a.condition_holds},
          {"discount_observed", a.discount_observed},
          {"bound_value", a.bound_value},
          {"tail_bound", a.tail_bound}};
}

Json to_json(const CalibrationInput& in) {
  return {{"p_bar", in.regular_price},       {"d_bar", in.aggregate_demand},
          {"alpha_bar", in.alpha_bar},       {"beta", in.elastic_share},
          {"gamma", in.relative_elasticity}, {"mu", in.error_mean},
          {"theta", in.error_sd},            {"demand_is_proxy", in.demand_is_proxy}};
}

Json to_json(const CalibratedScenario& sc) {
  return {{"demand", to_json(sc.demand)},
          {"uncertainty", to_json(sc.uncertainty)},
          {"market", to_json(sc.market)},
          {"regular_demand", to_json(sc.regular_demand)},
          {"warnings", sc.warnings}};
}

Json to_json(const PredictionReport& r) {
  Json qq = Json::array();
  for (const auto& [theory, sample] : r.qq_points) qq.push_back({theory, sample});
  return {{"residual_mean", r.residual_mean},
          {"residual_sd", r.residual_sd},
          {"residual_count", r.residual_count},
          {"degenerate_qq", r.degenerate_qq},
          {"qq_points", qq}};
}

MdpSpec mdp_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("MDP config must be a JSON object");
  RateModel rates;
  rates.arrival.coeffs = number_list(j, "arrival");
  rates.departure.coeffs = number_list(j, "departure");
  rates.null_price = number(j, "p_max");
  const double k = number(j, "capacity");
  if (k != std::floor(k) || k < 1 || k > 1e6) throw ParseError("'capacity' must be a positive integer");
  const double points = j.contains("grid_points") ? number(j, "grid_points") : 1000.0;
  if (points != std::floor(points) || points < 2) throw ParseError("'grid_points' must be an integer >= 2");
  auto spec = MdpSpec::uniform(static_cast<int>(k), std::move(rates), static_cast<std::size_t>(points));
  const auto boundary = j.value("boundary", std::string("reflecting"));
  if (boundary == "reflecting") {
    spec.boundary = EmptyStateBoundary::kReflecting;
  } else if (boundary == "zero") {
    spec.boundary = EmptyStateBoundary::kZeroBelowEmpty;
  } else {
    throw ParseError("'boundary' must be \"reflecting\" or \"zero\"");
  }
  validate(spec);
  return spec;
}

Json to_json(const MdpSpec& spec) {
  return {{"capacity", spec.capacity},
          {"grid_points", spec.price_grid.size()},
          {"arrival", spec.rates.arrival.coeffs},
          {"departure", spec.rates.departure.coeffs},
          {"p_max", spec.rates.null_price},
          {"boundary", spec.boundary == EmptyStateBoundary::kReflecting ? "reflecting" : "zero"}};
}

Json to_json(const DpSolution& s) {
  return {{"J_star", s.gain},
          {"h", s.relative_reward},
          {"policy", s.policy.prices},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"bellman_residual", s.bellman_residual}};
}

Json to_json(const StructureReport& r) {
  return {{"h_monotone", r.h_monotone},
          {"h_concave", r.h_concave},
          {"price_monotone", r.price_monotone},
          {"violations", r.violations}};
}

Json to_json(const SimResult& r) {
  return {{"revenue_rate_estimate", r.revenue_rate_estimate},
          {"revenue_rate_stderr", r.revenue_rate_stderr},
          {"occupancy", r.occupancy},
          {"occupancy_stderr", r.occupancy_stderr},
          {"transitions", r.transitions}};
}

Json to_json(const ComparisonReport& r) {
  return {{"analytic_revenue", r.analytic_revenue},
          {"revenue_z", r.revenue_z},
          {"occupancy_tv", r.occupancy_tv},
          {"pass", r.pass},
          {"detail", r.detail}};
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string format_sig6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace spottransit
