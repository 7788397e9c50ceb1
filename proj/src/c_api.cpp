// extern "C" wrapper over the C++ core. Exceptions never cross this boundary.
#include "spottransit/spottransit.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "spottransit/error.hpp"
#include "spottransit/reports.hpp"
#include "spottransit/serialization.hpp"

namespace st = spottransit;

struct st_document {
  std::string text;
};
struct st_demand {
  st::DemandSpec spec;
};
struct st_uncertainty {
  st::UncertaintyModel model;
};
struct st_scenario {
  st::ScenarioFile file;
};
struct st_mdp {
  st::MdpSpec spec;
  std::optional<st::DpSolution> solution;
};

namespace {

thread_local std::string g_last_error;

st_status map_code(st::ErrorCode code) {
  switch (code) {
    case st::ErrorCode::kInvalidArgument: return ST_ERR_INVALID_ARGUMENT;
    case st::ErrorCode::kDomain: return ST_ERR_DOMAIN;
    case st::ErrorCode::kNoSolution: return ST_ERR_NO_SOLUTION;
    case st::ErrorCode::kConvergence: return ST_ERR_CONVERGENCE;
    case st::ErrorCode::kIo: return ST_ERR_IO;
    case st::ErrorCode::kParse: return ST_ERR_PARSE;
    case st::ErrorCode::kInvariant: return ST_ERR_INVARIANT;
  }
  return ST_ERR_INTERNAL;
}

template <class F>
st_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return ST_OK;
  } catch (const st::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const st::Json::exception& e) {
    g_last_error = e.what();
    return ST_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ST_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ST_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ST_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw st::InvalidArgument(std::string(what) + " is null");
}

st::DemandKind kind_of(st_demand_kind k) {
  switch (k) {
    case ST_DEMAND_ISO_ELASTIC: return st::DemandKind::kIsoElastic;
    case ST_DEMAND_LINEAR: return st::DemandKind::kLinear;
  }
  throw st::InvalidArgument("unknown demand kind");
}

void emit(std::string text, st_document** out) {
  *out = new st_document{std::move(text)};
}

void emit_json(const st::Json& j, st_document** out) { emit(j.dump(2) + "\n", out); }

void emit_rows(const st::Json& j, const std::vector<st::ScenarioRow>& rows, st_format format,
               st_document** out) {
  if (format == ST_FORMAT_CSV) {
    emit(st::to_csv(rows), out);
  } else if (format == ST_FORMAT_JSON) {
    emit_json(j, out);
  } else {
    throw st::InvalidArgument("unknown output format");
  }
}

}  // namespace

extern "C" {

const char* st_version(void) { return "1.0.0"; }

const char* st_status_string(st_status status) {
  switch (status) {
    case ST_OK: return "ok";
    case ST_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ST_ERR_DOMAIN: return "domain error";
    case ST_ERR_NO_SOLUTION: return "no solution";
    case ST_ERR_CONVERGENCE: return "convergence failure";
    case ST_ERR_IO: return "i/o error";
    case ST_ERR_PARSE: return "parse error";
    case ST_ERR_INVARIANT: return "invariant violation";
    case ST_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* st_last_error(void) { return g_last_error.c_str(); }

const char* st_document_text(const st_document* doc) { return doc ? doc->text.c_str() : ""; }
size_t st_document_size(const st_document* doc) { return doc ? doc->text.size() : 0; }

st_status st_document_write(const st_document* doc, const char* path) {
  return guarded([&] {
    require(doc, "document");
    require(path, "path");
    st::write_text(path, doc->text);
  });
}

void st_document_free(st_document* doc) { delete doc; }

st_status st_demand_create(st_demand_kind kind, double base, double alpha, st_demand** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto spec = kind_of(kind) == st::DemandKind::kIsoElastic ? st::DemandSpec::iso_elastic(base, alpha)
                                                              : st::DemandSpec::linear(base, alpha);
    *out = new st_demand{spec};
  });
}

st_status st_demand_eval(const st_demand* d, double price, double* quantity) {
  return guarded([&] {
    require(d, "demand");
    require(quantity, "quantity");
    *quantity = st::eval_demand(d->spec, price);
  });
}

st_status st_demand_elasticity(const st_demand* d, double price, double* sigma) {
  return guarded([&] {
    require(d, "demand");
    require(sigma, "sigma");
    *sigma = st::elasticity(d->spec, price);
  });
}

void st_demand_free(st_demand* d) { delete d; }

st_status st_uncertainty_create(double mean, double sd, double lower, double upper, st_uncertainty** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new st_uncertainty{st::UncertaintyModel::truncated(mean, sd, lower, upper)};
  });
}

st_status st_uncertainty_default(double mean, double sd, st_uncertainty** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new st_uncertainty{st::UncertaintyModel::gaussian(mean, sd)};
  });
}

st_status st_uncertainty_tail(const st_uncertainty* u, double t, double* prob) {
  return guarded([&] {
    require(u, "uncertainty");
    require(prob, "prob");
    *prob = st::tail_probability(u->model, t);
  });
}

st_status st_uncertainty_overshoot(const st_uncertainty* u, double t, double* value) {
  return guarded([&] {
    require(u, "uncertainty");
    require(value, "value");
    *value = st::partial_overshoot(u->model, t);
  });
}

void st_uncertainty_free(st_uncertainty* u) { delete u; }

st_status st_optimize_price(const st_demand* d, const st_uncertainty* u, const st_market* market,
                            st_static_solution* out) {
  return guarded([&] {
    require(d, "demand");
    require(u, "uncertainty");
    require(market, "market");
    require(out, "out");
    st::MarketParams mp;
    mp.cost = market->cost;
    mp.penalty = market->penalty;
    mp.capacity = market->capacity;
    const auto s = st::optimize_price(d->spec, u->model, mp);
    *out = st_static_solution{s.p_star,       s.expected_profit,      s.risk_free_profit,
                              s.overflow_loss, s.overflow_probability, s.elasticity_at_opt};
  });
}

st_status st_scenario_load(const char* path, st_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new st_scenario{st::load_scenario(path)};
  });
}

st_status st_scenario_parse(const char* json_text, const char* base_dir, st_scenario** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    st::Json j;
    try {
      j = st::Json::parse(json_text);
    } catch (const st::Json::exception& e) {
      throw st::ParseError(std::string("scenario: ") + e.what());
    }
    *out = new st_scenario{st::scenario_from_json(j, base_dir ? base_dir : "")};
  });
}

st_status st_scenario_preset(const char* ixp, st_demand_kind kind, st_scenario** out) {
  return guarded([&] {
    require(ixp, "ixp");
    require(out, "out");
    *out = nullptr;
    *out = new st_scenario{st::preset_scenario(ixp, kind_of(kind))};
  });
}

st_status st_scenario_to_json(const st_scenario* sc, st_document** out) {
  return guarded([&] {
    require(sc, "scenario");
    require(out, "out");
    emit_json(st::to_json(sc->file), out);
  });
}

void st_scenario_free(st_scenario* sc) { delete sc; }

st_status st_calibrate(const st_scenario* sc, st_document** out) {
  return guarded([&] {
    require(sc, "scenario");
    require(out, "out");
    const auto& f = sc->file;
    const auto scale = st::resolve_scale(f);
    st::Json arr = st::Json::array();
    for (double beta : f.betas) {
      const auto in = st::calibration_input(f, scale, beta);
      const auto cal = st::calibrate(in, f.kind, st::CostSettings{f.r_ratio, f.m_ratio});
      arr.push_back({{"beta", beta}, {"input", st::to_json(in)}, {"scenario", st::to_json(cal)}});
    }
    emit_json(st::Json{{"label", f.label}, {"calibrations", arr}}, out);
  });
}

st_status st_run_static(const st_scenario* sc, st_format format, st_document** out) {
  return guarded([&] {
    require(sc, "scenario");
    require(out, "out");
    const auto rows = st::run_scenario(sc->file);
    emit_rows(st::rows_to_json(rows), rows, format, out);
  });
}

st_status st_run_sweep(const st_scenario* sc, const char* parameter, const double* values, size_t count,
                       st_format format, st_document** out) {
  return guarded([&] {
    require(sc, "scenario");
    require(parameter, "parameter");
    require(out, "out");
    auto grid = st::SweepGrid::defaults(st::parse_sweep_parameter(parameter));
    if (values != nullptr) grid.values.assign(values, values + count);
    const auto table = st::run_sweep(sc->file, grid);
    if (format == ST_FORMAT_CSV) {
      std::string text = st::to_csv(table.rows);
      for (const auto& s : table.summaries) {
        text += "# monotonicity beta=" + st::format_sig6(s.beta) + " " + s.column + " " +
                (s.non_decreasing ? "non-decreasing" : "NOT non-decreasing") + " over " +
                std::to_string(s.points) + " points\n";
      }
      emit(std::move(text), out);
    } else {
      emit_rows(st::to_json(table), table.rows, format, out);
    }
  });
}

st_status st_run_worst_case(const st_scenario* sc, st_format format, int* floors_met, st_document** out) {
  return guarded([&] {
    require(sc, "scenario");
    require(out, "out");
    const auto report = st::run_worst_case(sc->file);
    if (floors_met) *floors_met = report.floors_met ? 1 : 0;
    if (format == ST_FORMAT_CSV) {
      std::string text = st::to_csv(report.rows);
      for (const auto& f : report.findings) text += "# finding: " + f + "\n";
      emit(std::move(text), out);
    } else {
      emit_rows(st::to_json(report), report.rows, format, out);
    }
  });
}

st_status st_predict(const char* trace_path, int64_t window_seconds, st_document** out) {
  return guarded([&] {
    require(trace_path, "trace_path");
    require(out, "out");
    const auto series = st::load_series(trace_path);
    const auto report = st::prediction_errors(series, window_seconds);
    st::Json j = st::to_json(report);
    j["percentile_95"] = st::percentile_95(series);
    j["samples"] = series.values.size();
    j["gaps_filled"] = series.gaps_filled;
    emit_json(j, out);
  });
}

st_status st_mdp_parse(const char* json_text, st_mdp** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    st::Json j;
    try {
      j = st::Json::parse(json_text);
    } catch (const st::Json::exception& e) {
      throw st::ParseError(std::string("mdp: ") + e.what());
    }
    *out = new st_mdp{st::mdp_from_json(j), std::nullopt};
  });
}

st_status st_mdp_load(const char* path, st_mdp** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    std::ifstream in(path);
    if (!in) throw st::IoError(std::string("cannot open ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    st::Json j;
    try {
      j = st::Json::parse(ss.str());
    } catch (const st::Json::exception& e) {
      throw st::ParseError(std::string(path) + ": " + e.what());
    }
    *out = new st_mdp{st::mdp_from_json(j), std::nullopt};
  });
}

st_status st_mdp_reference(double departure_coefficient, int departure_exponent, int capacity,
                           size_t grid_points, st_mdp** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new st_mdp{st::reference_instance(departure_coefficient, departure_exponent, capacity, grid_points),
                      std::nullopt};
  });
}

st_status st_mdp_solve(st_mdp* mdp, st_mdp_method method, double tolerance, st_document** out) {
  return guarded([&] {
    require(mdp, "mdp");
    st::DpOptions opts;
    if (tolerance > 0.0) opts.tolerance = tolerance;
    st::DpSolution sol;
    switch (method) {
      case ST_MDP_POLICY_ITERATION: sol = st::policy_iteration(mdp->spec, opts); break;
      case ST_MDP_VALUE_ITERATION: sol = st::relative_value_iteration(mdp->spec, opts); break;
      default: throw st::InvalidArgument("unknown solver method");
    }
    mdp->solution = sol;
    if (out) {
      st::Json j{{"spec", st::to_json(mdp->spec)},
                 {"method", method == ST_MDP_POLICY_ITERATION ? "policy_iteration" : "value_iteration"},
                 {"solution", st::to_json(sol)}};
      if (sol.converged) j["structure"] = st::to_json(st::verify_structure(sol));
      emit_json(j, out);
    }
  });
}

st_status st_mdp_gain(const st_mdp* mdp, double* gain) {
  return guarded([&] {
    require(mdp, "mdp");
    require(gain, "gain");
    if (!mdp->solution) throw st::InvalidArgument("mdp has not been solved");
    *gain = mdp->solution->gain;
  });
}

st_status st_mdp_policy(const st_mdp* mdp, double* prices, size_t count, size_t* states) {
  return guarded([&] {
    require(mdp, "mdp");
    if (!mdp->solution) throw st::InvalidArgument("mdp has not been solved");
    const auto& p = mdp->solution->policy.prices;
    if (states) *states = p.size();
    if (prices) {
      for (size_t i = 0; i < count && i < p.size(); ++i) prices[i] = p[i];
    }
  });
}

void st_mdp_free(st_mdp* mdp) { delete mdp; }

namespace {

void run_simulation(const st::MdpSpec& spec, const st::Policy& policy, uint64_t seed, double horizon,
                    int replications, st_document** out) {
  if (replications < 1) throw st::InvalidArgument("replications must be >= 1");
  st::validate(spec, policy);
  st::SimConfig cfg;
  cfg.spec = spec;
  cfg.policy = policy;
  cfg.seed = seed;
  if (horizon > 0.0) {
    cfg.horizon = horizon;
    cfg.warmup = 0.05 * horizon;
  }
  const auto results = st::simulate_replications(cfg, replications);
  st::Json arr = st::Json::array();
  bool pass = true;
  for (const auto& r : results) {
    const auto cmp = st::compare_to_analytic(r, cfg.spec, cfg.policy);
    pass = pass && cmp.pass;
    arr.push_back({{"result", st::to_json(r)}, {"comparison", st::to_json(cmp)}});
  }
  emit_json(st::Json{{"seed", seed},
                     {"horizon", cfg.horizon},
                     {"warmup", cfg.warmup},
                     {"policy", policy.prices},
                     {"analytic_revenue", st::average_revenue(spec, policy)},
                     {"replications", arr},
                     {"pass", pass}},
            out);
}

}  // namespace

st_status st_simulate(const st_mdp* mdp, uint64_t seed, double horizon, int replications, st_document** out) {
  return guarded([&] {
    require(mdp, "mdp");
    require(out, "out");
    if (!mdp->solution) throw st::InvalidArgument("mdp has not been solved");
    run_simulation(mdp->spec, mdp->solution->policy, seed, horizon, replications, out);
  });
}

st_status st_simulate_policy(const st_mdp* mdp, const double* prices, size_t count, uint64_t seed,
                             double horizon, int replications, st_document** out) {
  return guarded([&] {
    require(mdp, "mdp");
    require(prices, "prices");
    require(out, "out");
    run_simulation(mdp->spec, st::Policy{std::vector<double>(prices, prices + count)}, seed, horizon,
                   replications, out);
  });
}

}  // extern "C"
