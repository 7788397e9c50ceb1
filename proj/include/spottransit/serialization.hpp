#pragma once

#include "json.hpp"

#include "spottransit/calibration.hpp"
#include "spottransit/demand.hpp"
#include "spottransit/dynamic_mdp.hpp"
#include "spottransit/simulator.hpp"
#include "spottransit/static_pricing.hpp"
#include "spottransit/traffic.hpp"
#include "spottransit/uncertainty.hpp"
#include "spottransit/welfare.hpp"

namespace spottransit {

using Json = nlohmann::json;

// {"kind":"iso"|"linear","v":...,"alpha":...}
Json to_json(const DemandSpec& d);
DemandSpec demand_from_json(const Json& j);

// {"mu":...,"theta":...,"a":...,"b":...}; a and b default to mu -/+ 3 theta.
Json to_json(const UncertaintyModel& u);
UncertaintyModel uncertainty_from_json(const Json& j);

Json to_json(const MarketParams& mp);
MarketParams market_from_json(const Json& j);

Json to_json(const StaticSolution& s);
StaticSolution static_solution_from_json(const Json& j);

Json to_json(const WelfareReport& w);
Json to_json(const PriceAdvantage& a);
Json to_json(const CalibrationInput& in);
Json to_json(const CalibratedScenario& sc);
Json to_json(const PredictionReport& r);

// {"capacity":K,"grid_points":N,"arrival":[c0,c1,..],"departure":[..],
//  "p_max":...,"boundary":"reflecting"|"zero"}
MdpSpec mdp_from_json(const Json& j);
Json to_json(const MdpSpec& spec);
Json to_json(const DpSolution& s);
Json to_json(const StructureReport& r);
Json to_json(const SimResult& r);
Json to_json(const ComparisonReport& r);

/// Shortest representation that round-trips a double exactly.
std::string format_double(double x);
/// Six significant digits, used for CSV tables.
std::string format_sig6(double x);

}  // namespace spottransit
