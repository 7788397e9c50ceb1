// Command-line front end. Talks to the library only through the C API.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spottransit/spottransit.h"

namespace {

struct Failure {
  st_status status;
};

void check(st_status s) {
  if (s != ST_OK) throw Failure{s};
}

struct Doc {
  st_document* p = nullptr;
  ~Doc() { st_document_free(p); }
};
struct Scenario {
  st_scenario* p = nullptr;
  ~Scenario() { st_scenario_free(p); }
};
struct Mdp {
  st_mdp* p = nullptr;
  ~Mdp() { st_mdp_free(p); }
};

struct Options {
  std::string scenario;
  std::string ixp = "LINX";
  std::string demand = "iso";
  std::string out;
  std::string format = "json";

  std::string sweep_param = "r_ratio";
  std::vector<double> sweep_values;

  std::string trace;
  std::int64_t window = 604800;

  std::string mdp_file;
  double dep_coef = 0.3;
  int dep_exp = 2;
  int capacity = 100;
  std::size_t grid_points = 1000;
  std::string method = "pi";
  double tolerance = 0.0;

  std::optional<std::uint64_t> seed;
  double horizon = 0.0;
  int replications = 1;
  std::vector<double> policy;
};

st_format format_of(const Options& o) { return o.format == "csv" ? ST_FORMAT_CSV : ST_FORMAT_JSON; }

st_demand_kind kind_of(const std::string& s) { return s == "linear" ? ST_DEMAND_LINEAR : ST_DEMAND_ISO_ELASTIC; }

void load_scenario(const Options& o, Scenario& sc) {
  if (!o.scenario.empty()) {
    check(st_scenario_load(o.scenario.c_str(), &sc.p));
  } else {
    check(st_scenario_preset(o.ixp.c_str(), kind_of(o.demand), &sc.p));
  }
}

void load_mdp(const Options& o, Mdp& m) {
  if (!o.mdp_file.empty()) {
    check(st_mdp_load(o.mdp_file.c_str(), &m.p));
  } else {
    check(st_mdp_reference(o.dep_coef, o.dep_exp, o.capacity, o.grid_points, &m.p));
  }
}

// Writes to <out>/<name>.<ext> when --out is given, stdout otherwise.
void deliver(const Options& o, const Doc& d, const std::string& name, bool json_only = false) {
  const std::string ext = json_only || o.format != "csv" ? "json" : "csv";
  if (o.out.empty()) {
    std::fwrite(st_document_text(d.p), 1, st_document_size(d.p), stdout);
    return;
  }
  const auto path = (std::filesystem::path(o.out) / (name + "." + ext)).string();
  check(st_document_write(d.p, path.c_str()));
  std::cerr << "wrote " << path << "\n";
}

void cmd_calibrate(const Options& o) {
  Scenario sc;
  load_scenario(o, sc);
  Doc d;
  check(st_calibrate(sc.p, &d.p));
  deliver(o, d, "calibrate", true);
}

void cmd_static(const Options& o) {
  Scenario sc;
  load_scenario(o, sc);
  Doc d;
  check(st_run_static(sc.p, format_of(o), &d.p));
  deliver(o, d, "static");
}

void cmd_sweep(const Options& o) {
  Scenario sc;
  load_scenario(o, sc);
  Doc d;
  const double* values = o.sweep_values.empty() ? nullptr : o.sweep_values.data();
  check(st_run_sweep(sc.p, o.sweep_param.c_str(), values, o.sweep_values.size(), format_of(o), &d.p));
  deliver(o, d, "sweep_" + o.sweep_param);
}

void cmd_worst_case(const Options& o) {
  Scenario sc;
  load_scenario(o, sc);
  Doc d;
  int met = 0;
  check(st_run_worst_case(sc.p, format_of(o), &met, &d.p));
  deliver(o, d, "worst_case");
  std::cerr << (met ? "worst-case floors met\n" : "worst-case floors NOT met; see findings\n");
}

void cmd_predict(const Options& o) {
  Doc d;
  check(st_predict(o.trace.c_str(), o.window, &d.p));
  deliver(o, d, "predict", true);
}

void cmd_mdp(const Options& o) {
  Mdp m;
  load_mdp(o, m);
  Doc d;
  check(st_mdp_solve(m.p, o.method == "rvi" ? ST_MDP_VALUE_ITERATION : ST_MDP_POLICY_ITERATION, o.tolerance,
                     &d.p));
  deliver(o, d, "mdp", true);
}

void cmd_simulate(const Options& o) {
  Mdp m;
  load_mdp(o, m);
  Doc d;
  if (o.policy.empty()) {
    check(st_mdp_solve(m.p, o.method == "rvi" ? ST_MDP_VALUE_ITERATION : ST_MDP_POLICY_ITERATION,
                       o.tolerance, nullptr));
    check(st_simulate(m.p, *o.seed, o.horizon, o.replications, &d.p));
  } else {
    check(st_simulate_policy(m.p, o.policy.data(), o.policy.size(), *o.seed, o.horizon, o.replications,
                             &d.p));
  }
  deliver(o, d, "simulate", true);
}

// Typical-setting run, the four default sweeps and the worst case, one file each.
void cmd_report(Options o) {
  if (o.out.empty()) throw CLI::ValidationError("report", "--out <dir> is required");
  Scenario sc;
  load_scenario(o, sc);
  {
    Doc d;
    check(st_run_static(sc.p, format_of(o), &d.p));
    deliver(o, d, "static");
  }
  for (const char* p : {"r_ratio", "m_ratio", "gamma", "beta"}) {
    Doc d;
    check(st_run_sweep(sc.p, p, nullptr, 0, format_of(o), &d.p));
    deliver(o, d, std::string("sweep_") + p);
  }
  Doc d;
  int met = 0;
  check(st_run_worst_case(sc.p, format_of(o), &met, &d.p));
  deliver(o, d, "worst_case");
}

void scenario_flags(CLI::App* sub, Options& o) {
  sub->add_option("--ixp", o.ixp, "IXP preset used when no scenario file is given")->capture_default_str();
  sub->add_option("--demand", o.demand, "Demand kind for presets")
      ->check(CLI::IsMember({"iso", "iso-elastic", "linear"}))
      ->capture_default_str();
}

void mdp_flags(CLI::App* sub, Options& o) {
  sub->add_option("--spec", o.mdp_file, "MDP JSON config (defaults to the reference instance)")
      ->check(CLI::ExistingFile);
  sub->add_option("--departure-coef", o.dep_coef, "Reference departure coefficient")->capture_default_str();
  sub->add_option("--departure-exp", o.dep_exp, "Reference departure exponent")->capture_default_str();
  sub->add_option("--capacity", o.capacity, "Reference capacity K")->capture_default_str();
  sub->add_option("--grid-points", o.grid_points, "Reference price grid size")->capture_default_str();
  sub->add_option("--method", o.method, "pi (policy iteration) or rvi (relative value iteration)")
      ->check(CLI::IsMember({"pi", "rvi"}))
      ->capture_default_str();
  sub->add_option("--tolerance", o.tolerance, "Solver tolerance (0 = default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spot transit pricing toolkit"};
  app.set_version_flag("--version", st_version());
  app.require_subcommand(1);
  Options o;
  app.add_option("--scenario", o.scenario, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "Output directory (stdout when omitted)");
  app.add_option("--format", o.format, "Output format for tables")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.fallthrough();

  auto* calibrate = app.add_subcommand("calibrate", "Print calibrated market parameters per beta");
  scenario_flags(calibrate, o);
  auto* stat = app.add_subcommand("static", "Typical-setting static pricing run");
  scenario_flags(stat, o);
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over a grid");
  scenario_flags(sweep, o);
  sweep->add_option("--param", o.sweep_param, "r_ratio, m_ratio, gamma or beta")
      ->check(CLI::IsMember({"r_ratio", "m_ratio", "gamma", "beta"}))
      ->capture_default_str();
  sweep->add_option("--values", o.sweep_values, "Grid values (defaults to the standard range)")->delimiter(',');
  auto* worst = app.add_subcommand("worst-case", "Run r=0.9 r-bar, m=1.5 p-bar, gamma=1.1 and check floors");
  scenario_flags(worst, o);
  auto* predict = app.add_subcommand("predict", "Persistence-forecast errors for a traffic trace");
  predict->add_option("--trace", o.trace, "Traffic CSV")->required()->check(CLI::ExistingFile);
  predict->add_option("--window", o.window, "Forecast lag in seconds")->capture_default_str();
  auto* mdp = app.add_subcommand("mdp", "Solve the dynamic pricing MDP");
  mdp_flags(mdp, o);
  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of a policy against the analytic model");
  mdp_flags(sim, o);
  sim->add_option("--seed", o.seed, "RNG seed")->required();
  sim->add_option("--horizon", o.horizon, "Simulated time (0 = default)");
  sim->add_option("--replications", o.replications, "Independent replications")->capture_default_str();
  sim->add_option("--policy", o.policy, "Explicit state prices instead of the optimal policy")->delimiter(',');
  auto* report = app.add_subcommand("report", "Write every table for one scenario into --out");
  scenario_flags(report, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*calibrate) cmd_calibrate(o);
    else if (*stat) cmd_static(o);
    else if (*sweep) cmd_sweep(o);
    else if (*worst) cmd_worst_case(o);
    else if (*predict) cmd_predict(o);
    else if (*mdp) cmd_mdp(o);
    else if (*sim) cmd_simulate(o);
    else if (*report) cmd_report(o);
  } catch (const Failure& f) {
    std::cerr << "error: " << st_status_string(f.status) << ": " << st_last_error() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
