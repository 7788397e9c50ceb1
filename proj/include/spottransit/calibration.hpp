#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spottransit/demand.hpp"
#include "spottransit/static_pricing.hpp"
#include "spottransit/uncertainty.hpp"

namespace spottransit {

struct CalibrationInput {
  double regular_price = 0.0;     // p-bar, $/Mbps
  double aggregate_demand = 0.0;  // d-bar(p-bar), billable Gbps
  double alpha_bar = 2.0;         // aggregate iso-elastic elasticity
  double elastic_share = 0.5;     // beta
  double relative_elasticity = 1.25;  // gamma
  double error_mean = 0.0;        // week-ahead prediction error mean, Gbps
  double error_sd = 1.0;          // week-ahead prediction error sd, Gbps
  bool demand_is_proxy = false;   // aggregate_demand approximated as 0.9 x peak
};

/// Spot cost and penalty relative to the regular cost and price.
struct CostSettings {
  double r_ratio = 0.5;  // r / r-bar
  double m_ratio = 1.0;  // m / p-bar
};

struct CalibratedScenario {
  DemandSpec demand;
  UncertaintyModel uncertainty;
  MarketParams market;
  DemandSpec regular_demand;
  std::vector<std::string> warnings;
};

void validate(const CalibrationInput& in);

/// r-bar = p-bar (1 - 1/alpha-bar). The same value serves both demand kinds.
double derive_regular_cost(const CalibrationInput& in, DemandKind kind);
/// Linear aggregate slope d-bar / (p-bar - r-bar).
double derive_linear_alpha_bar(const CalibrationInput& in);
/// Spot demand passing through (p-bar, beta d-bar).
DemandSpec derive_spot_demand(const CalibrationInput& in, DemandKind kind);
/// Aggregate (regular-transit) demand curve through (p-bar, d-bar).
DemandSpec derive_regular_demand(const CalibrationInput& in, DemandKind kind);
/// C = (0.4 + beta) d-bar and noise scaled by beta on a +/- 3 sd support.
std::pair<double, UncertaintyModel> derive_capacity_and_noise(const CalibrationInput& in);

CalibratedScenario calibrate(const CalibrationInput& in, DemandKind kind,
                             const CostSettings& costs = {});

// Published reference data.

struct RegionPrice {
  std::string_view name;
  double price;  // $/Mbps
};

struct IxpStats {
  std::string_view name;
  std::string_view acronym;
  std::string_view region;  // key into region_prices()
  double peak_gbps;
  double average_gbps;
  double error_mean;
  double error_sd;
};

const std::vector<RegionPrice>& region_prices();
const std::vector<IxpStats>& ixp_presets();
double region_price(std::string_view region);
const IxpStats& ixp_preset(std::string_view acronym);

/// Factor applied to the published peak when the 95th percentile is unknown.
inline constexpr double kPeakProxyFactor = 0.9;

CalibrationInput preset_input(const IxpStats& ixp, double elastic_share,
                              double relative_elasticity = 1.25);

}  // namespace spottransit
