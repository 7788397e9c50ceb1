/* Spot transit pricing toolkit: C interface.
 *
 * Every call returns an st_status. On failure, st_last_error() returns a
 * thread-local message describing the most recent error on that thread.
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function (NULL is accepted).
 */
#ifndef SPOTTRANSIT_H
#define SPOTTRANSIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPOTTRANSIT_BUILDING)
#define ST_API __attribute__((visibility("default")))
#else
#define ST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
  ST_OK = 0,
  ST_ERR_INVALID_ARGUMENT = 1,
  ST_ERR_DOMAIN = 2,
  ST_ERR_NO_SOLUTION = 3,
  ST_ERR_CONVERGENCE = 4,
  ST_ERR_IO = 5,
  ST_ERR_PARSE = 6,
  ST_ERR_INVARIANT = 7,
  ST_ERR_INTERNAL = 100
} st_status;

typedef enum st_demand_kind { ST_DEMAND_ISO_ELASTIC = 0, ST_DEMAND_LINEAR = 1 } st_demand_kind;
typedef enum st_format { ST_FORMAT_JSON = 0, ST_FORMAT_CSV = 1 } st_format;
typedef enum st_mdp_method { ST_MDP_POLICY_ITERATION = 0, ST_MDP_VALUE_ITERATION = 1 } st_mdp_method;

ST_API const char* st_version(void);
ST_API const char* st_status_string(st_status status);
ST_API const char* st_last_error(void);

/* Text result (JSON or CSV). */
typedef struct st_document st_document;
ST_API const char* st_document_text(const st_document* doc);
ST_API size_t st_document_size(const st_document* doc);
ST_API st_status st_document_write(const st_document* doc, const char* path);
ST_API void st_document_free(st_document* doc);

/* Demand curves and noise. */
typedef struct st_demand st_demand;
typedef struct st_uncertainty st_uncertainty;

ST_API st_status st_demand_create(st_demand_kind kind, double base, double alpha, st_demand** out);
ST_API st_status st_demand_eval(const st_demand* d, double price, double* quantity);
ST_API st_status st_demand_elasticity(const st_demand* d, double price, double* sigma);
ST_API void st_demand_free(st_demand* d);

/* Gaussian truncated to [lower, upper] and renormalized. */
ST_API st_status st_uncertainty_create(double mean, double sd, double lower, double upper,
                                       st_uncertainty** out);
/* Gaussian truncated to mean +/- 3 sd. */
ST_API st_status st_uncertainty_default(double mean, double sd, st_uncertainty** out);
ST_API st_status st_uncertainty_tail(const st_uncertainty* u, double t, double* prob);
ST_API st_status st_uncertainty_overshoot(const st_uncertainty* u, double t, double* value);
ST_API void st_uncertainty_free(st_uncertainty* u);

/* Static pricing. */
typedef struct st_market {
  double cost;     /* r, $/Mbps */
  double penalty;  /* m, $/Mbps per unit of overflow */
  double capacity; /* C, Gbps */
} st_market;

typedef struct st_static_solution {
  double p_star;
  double expected_profit;
  double risk_free_profit;
  double overflow_loss;
  double overflow_probability;
  double elasticity_at_opt;
} st_static_solution;

ST_API st_status st_optimize_price(const st_demand* d, const st_uncertainty* u, const st_market* market,
                                   st_static_solution* out);

/* Scenarios (JSON schema documented in the README). */
typedef struct st_scenario st_scenario;
ST_API st_status st_scenario_load(const char* path, st_scenario** out);
/* base_dir resolves relative trace paths; may be NULL. */
ST_API st_status st_scenario_parse(const char* json_text, const char* base_dir, st_scenario** out);
ST_API st_status st_scenario_preset(const char* ixp, st_demand_kind kind, st_scenario** out);
ST_API st_status st_scenario_to_json(const st_scenario* sc, st_document** out);
ST_API void st_scenario_free(st_scenario* sc);

ST_API st_status st_calibrate(const st_scenario* sc, st_document** out);
ST_API st_status st_run_static(const st_scenario* sc, st_format format, st_document** out);
/* values == NULL selects the default grid for the parameter. */
ST_API st_status st_run_sweep(const st_scenario* sc, const char* parameter, const double* values,
                              size_t count, st_format format, st_document** out);
/* floors_met may be NULL. */
ST_API st_status st_run_worst_case(const st_scenario* sc, st_format format, int* floors_met,
                                   st_document** out);
ST_API st_status st_predict(const char* trace_path, int64_t window_seconds, st_document** out);

/* Dynamic pricing. */
typedef struct st_mdp st_mdp;
ST_API st_status st_mdp_parse(const char* json_text, st_mdp** out);
ST_API st_status st_mdp_load(const char* path, st_mdp** out);
ST_API st_status st_mdp_reference(double departure_coefficient, int departure_exponent, int capacity,
                                  size_t grid_points, st_mdp** out);
/* Solves and keeps the solution in the handle. tolerance <= 0 uses the default. */
ST_API st_status st_mdp_solve(st_mdp* mdp, st_mdp_method method, double tolerance, st_document** out);
ST_API st_status st_mdp_gain(const st_mdp* mdp, double* gain);
/* Copies up to `count` state prices; *states receives K + 1. */
ST_API st_status st_mdp_policy(const st_mdp* mdp, double* prices, size_t count, size_t* states);
ST_API void st_mdp_free(st_mdp* mdp);

/* Simulates the solved policy and compares it with the analytic steady state.
 * horizon <= 0 uses the default; replications >= 1. */
ST_API st_status st_simulate(const st_mdp* mdp, uint64_t seed, double horizon, int replications,
                             st_document** out);
/* Same, for an explicit policy of K + 1 state prices; the mdp need not be solved. */
ST_API st_status st_simulate_policy(const st_mdp* mdp, const double* prices, size_t count, uint64_t seed,
                                    double horizon, int replications, st_document** out);

#ifdef __cplusplus
}
#endif

#endif /* SPOTTRANSIT_H */
