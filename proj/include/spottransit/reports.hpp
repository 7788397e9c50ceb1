#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spottransit/calibration.hpp"
#include "spottransit/serialization.hpp"
#include "spottransit/static_pricing.hpp"
#include "spottransit/welfare.hpp"

namespace spottransit {

/// Dollar figures: price ($/Mbps) x demand (Gbps) x 1000 Mbps/Gbps = $ per
/// month under 95th-percentile billing.
inline constexpr double kDollarsPerPriceGbps = 1000.0;
inline constexpr const char* kUnitsNote =
    "dollar figures = price($/Mbps) x demand(Gbps) x 1000, per month under 95th-percentile billing";

/// Explicitly supplied aggregate demand scale.
struct DemandScale {
  double aggregate_demand = 0.0;  // d-bar, Gbps
  double error_mean = 0.0;
  double error_sd = 0.0;
  bool is_proxy = false;
};

struct ScenarioFile {
  std::string label;
  double regular_price = 0.0;
  std::optional<std::filesystem::path> trace;  // 95th percentile + error stats from a trace
  std::optional<DemandScale> scale;            // explicit or IXP preset
  std::vector<double> betas{0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  double gamma = 1.25;
  double r_ratio = 0.5;
  double m_ratio = 1.0;
  double alpha_bar = 2.0;
  DemandKind kind = DemandKind::kIsoElastic;
  std::int64_t window_seconds = 604800;
};

void validate(const ScenarioFile& f);

/// Parses the scenario schema. Relative trace paths resolve against `base_dir`.
ScenarioFile scenario_from_json(const Json& j, const std::filesystem::path& base_dir = {});
ScenarioFile load_scenario(const std::filesystem::path& path);
Json to_json(const ScenarioFile& f);

/// Typical-setting scenario built from a bundled IXP preset.
ScenarioFile preset_scenario(std::string_view ixp_acronym, DemandKind kind);

/// Resolves the aggregate demand and error statistics (reads the trace if any).
DemandScale resolve_scale(const ScenarioFile& f);
CalibrationInput calibration_input(const ScenarioFile& f, const DemandScale& scale, double beta);

struct ScenarioRow {
  std::string label;
  DemandKind kind = DemandKind::kIsoElastic;
  std::string parameter;  // sweep parameter name, empty outside sweeps
  double value = 0.0;     // sweep parameter value
  double beta = 0.0;
  double gamma = 0.0;
  double r_ratio = 0.0;
  double m_ratio = 0.0;
  double regular_price = 0.0;
  double regular_cost = 0.0;
  double cost = 0.0;
  double penalty = 0.0;
  double capacity = 0.0;
  bool demand_is_proxy = false;
  StaticSolution solution;
  WelfareReport welfare;
  PriceAdvantage advantage;
  std::string status = "ok";  // "ok" or the failure reason

  bool ok() const noexcept { return status == "ok"; }
  double normalized_price() const noexcept { return solution.p_star / regular_price; }
  double discount_pct() const noexcept { return 100.0 * (1.0 - normalized_price()); }
};

/// Solves one calibrated point. Throws on calibration or solver failure.
ScenarioRow solve_point(const ScenarioFile& f, const DemandScale& scale, double beta);

/// One row per beta. Calibration rejections propagate as exceptions.
std::vector<ScenarioRow> run_scenario(const ScenarioFile& f);

enum class SweepParameter { kRRatio, kMRatio, kGamma, kBeta };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepGrid {
  SweepParameter parameter = SweepParameter::kRRatio;
  std::vector<double> values;

  /// r_ratio 0.1..0.9, m_ratio 0.5..1.5, gamma 1.1..2.0, beta 0.2..0.7.
  static SweepGrid defaults(SweepParameter p);
};

struct MonotonicitySummary {
  double beta = 0.0;
  std::string column;
  bool non_decreasing = true;
  std::size_t points = 0;
};

struct SweepTable {
  std::vector<ScenarioRow> rows;  // ordered by (value, beta)
  std::vector<MonotonicitySummary> summaries;
};

/// Failed points are kept as rows with a status message; the sweep continues.
SweepTable run_sweep(const ScenarioFile& f, const SweepGrid& grid);

struct WorstCaseReport {
  std::vector<ScenarioRow> rows;
  std::vector<std::string> findings;  // empty when every floor holds
  bool floors_met = true;
};

inline constexpr double kWorstRRatio = 0.9;
inline constexpr double kWorstMRatio = 1.5;
inline constexpr double kWorstGamma = 1.1;

/// Floors: p* < p-bar, profit improvement >= 10 %, surplus improvement
/// >= 5 % (iso-elastic) or >= 60 % (linear). Violations become findings.
WorstCaseReport check_floors(std::vector<ScenarioRow> rows);
/// Runs the scenario at r = 0.9 r-bar, m = 1.5 p-bar, gamma = 1.1.
WorstCaseReport run_worst_case(const ScenarioFile& f);

// Export.

std::string csv_header();
std::string to_csv(const std::vector<ScenarioRow>& rows);
Json to_json(const ScenarioRow& row);
Json rows_to_json(const std::vector<ScenarioRow>& rows);
std::vector<ScenarioRow> rows_from_json(const Json& j);
Json to_json(const SweepTable& t);
Json to_json(const WorstCaseReport& r);

/// Writes text to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spottransit
