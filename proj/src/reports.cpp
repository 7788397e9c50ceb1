#include "spottransit/reports.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "spottransit/error.hpp"
#include "spottransit/traffic.hpp"

namespace spottransit {

void validate(const ScenarioFile& f) {
  if (!(f.regular_price > 0.0)) throw InvalidArgument("scenario needs a positive regular price");
  if (f.trace.has_value() == f.scale.has_value()) {
    throw InvalidArgument("scenario needs exactly one demand-scale source (trace or explicit)");
  }
  if (f.betas.empty()) throw InvalidArgument("scenario needs at least one beta");
  for (double b : f.betas) {
    if (!(b > 0.0)) throw InvalidArgument("elastic share beta must be > 0 (zero elastic share)");
  }
  if (!(f.gamma > 0.0) || !(f.r_ratio > 0.0) || !(f.m_ratio > 0.0)) {
    throw InvalidArgument("gamma, r_ratio and m_ratio must be positive");
  }
}

namespace {

double get_number(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("scenario field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

ScenarioFile scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  ScenarioFile f;
  f.label = j.value("label", std::string{});

  const IxpStats* ixp = nullptr;
  if (j.contains("ixp")) {
    ixp = &ixp_preset(j.at("ixp").get<std::string>());
    if (f.label.empty()) f.label = std::string(ixp->acronym);
  }

  if (j.contains("p_bar")) {
    f.regular_price = get_number(j, "p_bar");
  } else if (j.contains("region")) {
    f.regular_price = region_price(j.at("region").get<std::string>());
  } else if (ixp) {
    f.regular_price = region_price(ixp->region);
  } else {
    throw ParseError("scenario needs 'region' or 'p_bar'");
  }

  int sources = 0;
  if (j.contains("trace")) {
    ++sources;
    std::filesystem::path p = j.at("trace").get<std::string>();
    f.trace = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (ixp) {
    ++sources;
    f.scale = DemandScale{kPeakProxyFactor * ixp->peak_gbps, ixp->error_mean, ixp->error_sd, true};
  }
  if (j.contains("d_bar")) {
    ++sources;
    f.scale = DemandScale{get_number(j, "d_bar"), j.contains("mu") ? get_number(j, "mu") : 0.0,
                          get_number(j, "theta"), j.value("demand_is_proxy", false)};
  }
  if (sources != 1) {
    throw ParseError("scenario needs exactly one of 'trace', 'ixp' or 'd_bar' as the demand source");
  }

  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    f.betas.clear();
    if (b.is_array()) {
      for (const auto& x : b) f.betas.push_back(x.get<double>());
    } else {
      f.betas.push_back(get_number(j, "beta"));
    }
  }
  if (j.contains("gamma")) f.gamma = get_number(j, "gamma");
  if (j.contains("r_ratio")) f.r_ratio = get_number(j, "r_ratio");
  if (j.contains("m_ratio")) f.m_ratio = get_number(j, "m_ratio");
  if (j.contains("alpha_bar")) f.alpha_bar = get_number(j, "alpha_bar");
  if (j.contains("demand")) f.kind = parse_demand_kind(j.at("demand").get<std::string>());
  if (j.contains("window_seconds")) f.window_seconds = static_cast<std::int64_t>(get_number(j, "window_seconds"));
  validate(f);
  return f;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError("scenario " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j, path.parent_path());
}

Json to_json(const ScenarioFile& f) {
  Json j{{"label", f.label},         {"p_bar", f.regular_price}, {"beta", f.betas},
         {"gamma", f.gamma},         {"r_ratio", f.r_ratio},     {"m_ratio", f.m_ratio},
         {"alpha_bar", f.alpha_bar}, {"demand", std::string(to_string(f.kind))},
         {"window_seconds", f.window_seconds}};
  if (f.trace) j["trace"] = f.trace->string();
  if (f.scale) {
    j["d_bar"] = f.scale->aggregate_demand;
    j["mu"] = f.scale->error_mean;
    j["theta"] = f.scale->error_sd;
    j["demand_is_proxy"] = f.scale->is_proxy;
  }
  return j;
}

ScenarioFile preset_scenario(std::string_view ixp_acronym, DemandKind kind) {
  const auto& ixp = ixp_preset(ixp_acronym);
  ScenarioFile f;
  f.label = std::string(ixp.acronym);
  f.regular_price = region_price(ixp.region);
  f.scale = DemandScale{kPeakProxyFactor * ixp.peak_gbps, ixp.error_mean, ixp.error_sd, true};
  f.kind = kind;
  return f;
}

DemandScale resolve_scale(const ScenarioFile& f) {
  validate(f);
  if (f.scale) return *f.scale;
  const auto series = load_series(*f.trace);
  const auto errors = prediction_errors(series, f.window_seconds);
  return DemandScale{percentile_95(series), errors.residual_mean, errors.residual_sd, false};
}

CalibrationInput calibration_input(const ScenarioFile& f, const DemandScale& scale, double beta) {
  CalibrationInput in;
  in.regular_price = f.regular_price;
  in.aggregate_demand = scale.aggregate_demand;
  in.alpha_bar = f.alpha_bar;
  in.elastic_share = beta;
  in.relative_elasticity = f.gamma;
  in.error_mean = scale.error_mean;
  in.error_sd = scale.error_sd;
  in.demand_is_proxy = scale.is_proxy;
  return in;
}

ScenarioRow solve_point(const ScenarioFile& f, const DemandScale& scale, double beta) {
  const auto in = calibration_input(f, scale, beta);
  const auto sc = calibrate(in, f.kind, CostSettings{f.r_ratio, f.m_ratio});
  ScenarioRow row;
  row.label = f.label;
  row.kind = f.kind;
  row.beta = beta;
  row.gamma = f.gamma;
  row.r_ratio = f.r_ratio;
  row.m_ratio = f.m_ratio;
  row.regular_price = f.regular_price;
  row.regular_cost = *sc.market.regular_cost;
  row.cost = sc.market.cost;
  row.penalty = sc.market.penalty;
  row.capacity = sc.market.capacity;
  row.demand_is_proxy = in.demand_is_proxy;
  row.solution = optimize_price(sc.demand, sc.uncertainty, sc.market);
  row.welfare = welfare_report(sc.demand, sc.uncertainty, sc.market, row.solution);
  row.advantage = check_price_advantage(sc.demand, sc.uncertainty, sc.market, row.solution);
  return row;
}

std::vector<ScenarioRow> run_scenario(const ScenarioFile& f) {
  const auto scale = resolve_scale(f);
  std::vector<ScenarioRow> rows;
  rows.reserve(f.betas.size());
  for (double beta : f.betas) rows.push_back(solve_point(f, scale, beta));
  return rows;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "r_ratio") return SweepParameter::kRRatio;
  if (name == "m_ratio") return SweepParameter::kMRatio;
  if (name == "gamma") return SweepParameter::kGamma;
  if (name == "beta") return SweepParameter::kBeta;
  throw InvalidArgument("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kRRatio: return "r_ratio";
    case SweepParameter::kMRatio: return "m_ratio";
    case SweepParameter::kGamma: return "gamma";
    case SweepParameter::kBeta: return "beta";
  }
  return "?";
}

SweepGrid SweepGrid::defaults(SweepParameter p) {
  auto range = [](double lo, double hi, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) v.push_back(std::round((lo + step * i) * 1e9) / 1e9);
    return v;
  };
  switch (p) {
    case SweepParameter::kRRatio: return {p, range(0.1, 0.9, 0.1)};
    case SweepParameter::kMRatio: return {p, range(0.5, 1.5, 0.1)};
    case SweepParameter::kGamma: return {p, range(1.1, 2.0, 0.1)};
    case SweepParameter::kBeta: return {p, range(0.2, 0.7, 0.1)};
  }
  return {p, {}};
}

SweepTable run_sweep(const ScenarioFile& f, const SweepGrid& grid) {
  if (grid.values.empty()) throw InvalidArgument("sweep grid is empty");
  const auto scale = resolve_scale(f);

  struct Point {
    ScenarioFile file;
    double beta;
    double value;
  };
  std::vector<Point> points;
  for (double value : grid.values) {
    ScenarioFile g = f;
    switch (grid.parameter) {
      case SweepParameter::kRRatio: g.r_ratio = value; break;
      case SweepParameter::kMRatio: g.m_ratio = value; break;
      case SweepParameter::kGamma: g.gamma = value; break;
      case SweepParameter::kBeta: g.betas = {value}; break;
    }
    for (double beta : g.betas) points.push_back({g, beta, value});
  }

  std::vector<std::future<ScenarioRow>> jobs;
  jobs.reserve(points.size());
  for (const auto& pt : points) {
    jobs.push_back(std::async(std::launch::async, [&pt, &scale, &grid] {
      ScenarioRow row;
      try {
        row = solve_point(pt.file, scale, pt.beta);
      } catch (const std::exception& e) {
        row.label = pt.file.label;
        row.kind = pt.file.kind;
        row.beta = pt.beta;
        row.gamma = pt.file.gamma;
        row.r_ratio = pt.file.r_ratio;
        row.m_ratio = pt.file.m_ratio;
        row.regular_price = pt.file.regular_price;
        row.status = e.what();
      }
      row.parameter = std::string(to_string(grid.parameter));
      row.value = pt.value;
      return row;
    }));
  }

  SweepTable table;
  for (auto& j : jobs) table.rows.push_back(j.get());
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const ScenarioRow& a, const ScenarioRow& b) {
    return a.value != b.value ? a.value < b.value : a.beta < b.beta;
  });

  std::vector<std::string> columns{"p_star"};
  if (grid.parameter == SweepParameter::kGamma) {
    columns.push_back("profit_improvement_pct");
    columns.push_back("surplus_improvement_pct");
  }
  std::vector<double> betas;
  for (const auto& r : table.rows) {
    if (std::find(betas.begin(), betas.end(), r.beta) == betas.end()) betas.push_back(r.beta);
  }
  std::sort(betas.begin(), betas.end());
  for (double beta : betas) {
    for (const auto& column : columns) {
      MonotonicitySummary s{beta, column, true, 0};
      double prev = -INFINITY;
      for (const auto& r : table.rows) {
        if (r.beta != beta || !r.ok()) continue;
        const double x = column == "p_star"                   ? r.solution.p_star
                         : column == "profit_improvement_pct" ? r.welfare.profit_improvement_pct
                                                              : r.welfare.surplus_improvement_pct;
        if (x < prev - 1e-9 * std::max(1.0, std::abs(prev))) s.non_decreasing = false;
        prev = x;
        ++s.points;
      }
      table.summaries.push_back(s);
    }
  }
  return table;
}

WorstCaseReport check_floors(std::vector<ScenarioRow> rows) {
  WorstCaseReport r;
  r.rows = std::move(rows);
  for (const auto& row : r.rows) {
    std::ostringstream where;
    where << row.label << " " << to_string(row.kind) << " beta=" << row.beta << ": ";
    if (!row.ok()) {
      r.findings.push_back(where.str() + "point failed (" + row.status + ")");
      continue;
    }
    if (!(row.solution.p_star < row.regular_price)) {
      r.findings.push_back(where.str() + "spot price not below regular price");
    }
    if (!(row.welfare.profit_improvement_pct >= 10.0)) {
      r.findings.push_back(where.str() + "profit improvement " +
                           format_sig6(row.welfare.profit_improvement_pct) + "% below 10% floor");
    }
    const double surplus_floor = row.kind == DemandKind::kIsoElastic ? 5.0 : 60.0;
    if (!(row.welfare.surplus_improvement_pct >= surplus_floor)) {
      r.findings.push_back(where.str() + "surplus improvement " +
                           format_sig6(row.welfare.surplus_improvement_pct) + "% below " +
                           format_sig6(surplus_floor) + "% floor");
    }
  }
  r.floors_met = r.findings.empty();
  return r;
}

WorstCaseReport run_worst_case(const ScenarioFile& f) {
  ScenarioFile worst = f;
  worst.r_ratio = kWorstRRatio;
  worst.m_ratio = kWorstMRatio;
  worst.gamma = kWorstGamma;
  const auto scale = resolve_scale(worst);
  std::vector<ScenarioRow> rows;
  for (double beta : worst.betas) {
    try {
      rows.push_back(solve_point(worst, scale, beta));
    } catch (const std::exception& e) {
      ScenarioRow row;
      row.label = worst.label;
      row.kind = worst.kind;
      row.beta = beta;
      row.regular_price = worst.regular_price;
      row.status = e.what();
      rows.push_back(row);
    }
  }
  return check_floors(std::move(rows));
}

namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> cols{
      "label", "demand", "parameter", "value", "beta", "gamma", "r_ratio", "m_ratio", "p_bar",
      "r_bar", "r", "m", "capacity", "demand_is_proxy", "p_star", "normalized_price",
      "discount_pct", "expected_profit", "risk_free_profit", "overflow_loss",
      "overflow_probability", "elasticity_at_opt", "surplus_spot", "surplus_regular",
      "profit_spot", "profit_regular", "profit_regular_at_spot_cost", "welfare_spot",
      "welfare_regular", "profit_improvement_pct", "surplus_improvement_pct", "profit_gain_abs",
      "surplus_gain_abs", "profit_gain_usd", "surplus_gain_usd", "condition_holds",
      "discount_observed", "bound_value", "status"};
  return cols;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const ScenarioRow& row) {
  const auto& s = row.solution;
  const auto& w = row.welfare;
  return Json{{"label", row.label},
              {"demand", std::string(to_string(row.kind))},
              {"parameter", row.parameter},
              {"value", row.value},
              {"beta", row.beta},
              {"gamma", row.gamma},
              {"r_ratio", row.r_ratio},
              {"m_ratio", row.m_ratio},
              {"p_bar", row.regular_price},
              {"r_bar", row.regular_cost},
              {"r", row.cost},
              {"m", row.penalty},
              {"capacity", row.capacity},
              {"demand_is_proxy", row.demand_is_proxy},
              {"p_star", s.p_star},
              {"normalized_price", row.ok() ? row.normalized_price() : 0.0},
              {"discount_pct", row.ok() ? row.discount_pct() : 0.0},
              {"expected_profit", s.expected_profit},
              {"risk_free_profit", s.risk_free_profit},
              {"overflow_loss", s.overflow_loss},
              {"overflow_probability", s.overflow_probability},
              {"elasticity_at_opt", s.elasticity_at_opt},
              {"surplus_spot", w.surplus_spot},
              {"surplus_regular", w.surplus_regular},
              {"profit_spot", w.profit_spot},
              {"profit_regular", w.profit_regular},
              {"profit_regular_at_spot_cost", w.profit_regular_at_spot_cost},
              {"welfare_spot", w.welfare_spot},
              {"welfare_regular", w.welfare_regular},
              {"profit_improvement_pct", w.profit_improvement_pct},
              {"surplus_improvement_pct", w.surplus_improvement_pct},
              {"profit_gain_abs", w.profit_gain_abs},
              {"surplus_gain_abs", w.surplus_gain_abs},
              {"profit_gain_usd", w.profit_gain_abs * kDollarsPerPriceGbps},
              {"surplus_gain_usd", w.surplus_gain_abs * kDollarsPerPriceGbps},
              {"condition_holds", row.advantage.condition_holds},
              {"discount_observed", row.advantage.discount_observed},
              {"bound_value", row.advantage.bound_value},
              {"status", row.status}};
}

Json rows_to_json(const std::vector<ScenarioRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return Json{{"units", kUnitsNote}, {"rows", arr}};
}

std::vector<ScenarioRow> rows_from_json(const Json& j) {
  const Json& arr = j.is_object() ? j.at("rows") : j;
  std::vector<ScenarioRow> rows;
  for (const auto& o : arr) {
    ScenarioRow r;
    r.label = o.at("label").get<std::string>();
    r.kind = parse_demand_kind(o.at("demand").get<std::string>());
    r.parameter = o.at("parameter").get<std::string>();
    r.value = o.at("value").get<double>();
    r.beta = o.at("beta").get<double>();
    r.gamma = o.at("gamma").get<double>();
    r.r_ratio = o.at("r_ratio").get<double>();
    r.m_ratio = o.at("m_ratio").get<double>();
    r.regular_price = o.at("p_bar").get<double>();
    r.regular_cost = o.at("r_bar").get<double>();
    r.cost = o.at("r").get<double>();
    r.penalty = o.at("m").get<double>();
    r.capacity = o.at("capacity").get<double>();
    r.demand_is_proxy = o.at("demand_is_proxy").get<bool>();
    r.solution = static_solution_from_json(o);
    auto& w = r.welfare;
    w.surplus_spot = o.at("surplus_spot").get<double>();
    w.surplus_regular = o.at("surplus_regular").get<double>();
    w.profit_spot = o.at("profit_spot").get<double>();
    w.profit_regular = o.at("profit_regular").get<double>();
    w.profit_regular_at_spot_cost = o.at("profit_regular_at_spot_cost").get<double>();
    w.welfare_spot = o.at("welfare_spot").get<double>();
    w.welfare_regular = o.at("welfare_regular").get<double>();
    w.profit_improvement_pct = o.at("profit_improvement_pct").get<double>();
    w.surplus_improvement_pct = o.at("surplus_improvement_pct").get<double>();
    w.profit_gain_abs = o.at("profit_gain_abs").get<double>();
    w.surplus_gain_abs = o.at("surplus_gain_abs").get<double>();
    r.advantage.condition_holds = o.at("condition_holds").get<bool>();
    r.advantage.discount_observed = o.at("discount_observed").get<bool>();
    r.advantage.bound_value = o.at("bound_value").get<double>();
    r.status = o.at("status").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string to_csv(const std::vector<ScenarioRow>& rows) {
  std::string out = std::string("# ") + kUnitsNote + "\n" + csv_header() + "\n";
  for (const auto& row : rows) {
    const Json j = to_json(row);
    bool first = true;
    for (const auto& c : columns()) {
      if (!first) out += ',';
      first = false;
      const auto& v = j.at(c);
      if (v.is_string()) {
        out += csv_escape(v.get<std::string>());
      } else if (v.is_boolean()) {
        out += v.get<bool>() ? "true" : "false";
      } else {
        out += format_sig6(v.get<double>());
      }
    }
    out += '\n';
  }
  return out;
}

Json to_json(const SweepTable& t) {
  Json j = rows_to_json(t.rows);
  Json summaries = Json::array();
  for (const auto& s : t.summaries) {
    summaries.push_back(
        {{"beta", s.beta}, {"column", s.column}, {"non_decreasing", s.non_decreasing}, {"points", s.points}});
  }
  j["monotonicity"] = summaries;
  return j;
}

Json to_json(const WorstCaseReport& r) {
  Json j = rows_to_json(r.rows);
  j["findings"] = r.findings;
  j["floors_met"] = r.floors_met;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace spottransit
