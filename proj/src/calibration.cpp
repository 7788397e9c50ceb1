#include "spottransit/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "spottransit/error.hpp"
#include "spottransit/welfare.hpp"

namespace spottransit {

void validate(const CalibrationInput& in) {
  if (!(in.regular_price > 0.0)) throw InvalidArgument("regular price must be > 0");
  if (!(in.aggregate_demand > 0.0)) throw InvalidArgument("aggregate demand must be > 0");
  if (!(in.elastic_share > 0.0)) throw InvalidArgument("elastic share beta must be > 0 (zero elastic share)");
  if (!(in.elastic_share <= 1.0)) throw InvalidArgument("elastic share beta must be <= 1");
  if (!(in.relative_elasticity >= 1.0)) throw InvalidArgument("relative elasticity gamma must be >= 1");
  if (!(in.alpha_bar > 1.0)) throw InvalidArgument("aggregate elasticity alpha-bar must be > 1");
  if (!(in.error_sd > 0.0)) throw InvalidArgument("prediction error sd must be > 0");
}

double derive_regular_cost(const CalibrationInput& in, DemandKind /*kind*/) {
  if (!(in.alpha_bar > 1.0)) throw InvalidArgument("aggregate elasticity alpha-bar must be > 1");
  const double rbar = in.regular_price * (1.0 - 1.0 / in.alpha_bar);
  if (!(rbar > 0.0)) throw InvalidArgument("derived regular cost is not positive");
  return rbar;
}

double derive_linear_alpha_bar(const CalibrationInput& in) {
  const double rbar = derive_regular_cost(in, DemandKind::kIsoElastic);
  if (!(in.regular_price > rbar)) throw InvalidArgument("regular price must exceed regular cost");
  const double a = in.aggregate_demand / (in.regular_price - rbar);
  if (!(a > 0.0)) throw InvalidArgument("derived linear alpha-bar is not positive");
  return a;
}

DemandSpec derive_spot_demand(const CalibrationInput& in, DemandKind kind) {
  validate(in);
  const double spot_at_pbar = in.elastic_share * in.aggregate_demand;
  if (kind == DemandKind::kIsoElastic) {
    const double alpha = in.relative_elasticity * in.alpha_bar;
    return DemandSpec::iso_elastic(spot_at_pbar * std::pow(in.regular_price, alpha), alpha);
  }
  const double alpha = in.elastic_share * in.relative_elasticity * derive_linear_alpha_bar(in);
  return DemandSpec::linear(spot_at_pbar + alpha * in.regular_price, alpha);
}

DemandSpec derive_regular_demand(const CalibrationInput& in, DemandKind kind) {
  validate(in);
  if (kind == DemandKind::kIsoElastic) {
    return DemandSpec::iso_elastic(in.aggregate_demand * std::pow(in.regular_price, in.alpha_bar),
                                   in.alpha_bar);
  }
  const double alpha = derive_linear_alpha_bar(in);
  return DemandSpec::linear(in.aggregate_demand + alpha * in.regular_price, alpha);
}

std::pair<double, UncertaintyModel> derive_capacity_and_noise(const CalibrationInput& in) {
  validate(in);
  const double capacity = (0.4 + in.elastic_share) * in.aggregate_demand;
  auto noise = UncertaintyModel::gaussian(in.elastic_share * in.error_mean,
                                          in.elastic_share * in.error_sd);
  if (!(noise.upper() < capacity)) {
    throw InvalidArgument("scenario rejected: noise upper bound B=" + std::to_string(noise.upper()) +
                          " is not below capacity C=" + std::to_string(capacity));
  }
  return {capacity, noise};
}

CalibratedScenario calibrate(const CalibrationInput& in, DemandKind kind, const CostSettings& costs) {
  validate(in);
  if (!(costs.r_ratio > 0.0) || !(costs.m_ratio > 0.0)) {
    throw InvalidArgument("cost and penalty ratios must be positive");
  }
  const double rbar = derive_regular_cost(in, kind);
  auto [capacity, noise] = derive_capacity_and_noise(in);

  MarketParams mp;
  mp.cost = costs.r_ratio * rbar;
  mp.penalty = costs.m_ratio * in.regular_price;
  mp.capacity = capacity;
  mp.regular_cost = rbar;
  mp.regular_price = in.regular_price;

  CalibratedScenario sc{derive_spot_demand(in, kind), noise, mp, derive_regular_demand(in, kind), {}};
  validate_market(sc.uncertainty, sc.market);
  check_penalty_floor(sc.demand, sc.market);
  if (!surplus_defined(sc.demand)) {
    sc.warnings.push_back("spot elasticity alpha <= 2: consumer surplus undefined");
  }
  if (in.demand_is_proxy) {
    sc.warnings.push_back("aggregate demand approximated as 0.9 x published peak");
  }
  return sc;
}

const std::vector<RegionPrice>& region_prices() {
  static const std::vector<RegionPrice> prices{
      {"london", 7.5},
      {"newyork", 7.0},
      {"hongkong", 22.0},
  };
  return prices;
}

const std::vector<IxpStats>& ixp_presets() {
  static const std::vector<IxpStats> presets{
      {"London IX", "LINX", "london", 1200.0, 797.1, -15.9278, 174.8157},
      {"Moscow IX", "MSKIX", "london", 688.5, 416.0, 2.2313, 115.0810},
      {"Neutral IX", "NIX", "london", 217.8, 129.6, -1.2458, 30.2338},
      {"New York International IX", "NYIIX", "newyork", 205.9, 157.7, 3.9486, 26.0743},
      {"Spain IX", "ESPANIX", "london", 198.0, 172.5, -1.0476, 22.3824},
      {"Hong Kong IX", "HKIX", "hongkong", 180.0, 119.8, 1.7689, 22.0919},
  };
  return presets;
}

namespace {

std::string normalized(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace

double region_price(std::string_view region) {
  const auto key = normalized(region);
  for (const auto& r : region_prices()) {
    if (r.name == key) return r.price;
  }
  throw InvalidArgument("unknown region preset '" + std::string(region) + "'");
}

const IxpStats& ixp_preset(std::string_view acronym) {
  const auto key = normalized(acronym);
  for (const auto& ixp : ixp_presets()) {
    if (normalized(ixp.acronym) == key) return ixp;
  }
  throw InvalidArgument("unknown IXP preset '" + std::string(acronym) + "'");
}

CalibrationInput preset_input(const IxpStats& ixp, double elastic_share, double relative_elasticity) {
  CalibrationInput in;
  in.regular_price = region_price(ixp.region);
  in.aggregate_demand = kPeakProxyFactor * ixp.peak_gbps;
  in.elastic_share = elastic_share;
  in.relative_elasticity = relative_elasticity;
  in.error_mean = ixp.error_mean;
  in.error_sd = ixp.error_sd;
  in.demand_is_proxy = true;
  return in;
}

}  // namespace spottransit
