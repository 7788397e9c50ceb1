#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spottransit {

/// Polynomial sum_k coeffs[k] p^k.
struct Polynomial {
  std::vector<double> coeffs;
  double operator()(double p) const noexcept;
};

/// Price-dependent arrival and departure rates of the birth-death demand
/// process. The arrival rate is clamped at zero from below.
struct RateModel {
  Polynomial arrival;
  Polynomial departure;
  double null_price = 0.0;  // p_max, arrival rate vanishes here

  double arrival_rate(double p) const noexcept;
  double departure_rate(double p) const noexcept;
};

/// Treatment of the departure term at the empty state n = 0.
enum class EmptyStateBoundary {
  /// No departure can happen at n = 0; the departure mass stays at h_0.
  kReflecting,
  /// Literal h_{-1} = 0 convention: departure mass at n = 0 carries value 0.
  kZeroBelowEmpty,
};

struct MdpSpec {
  int capacity = 0;                 // K; states n = 0..K
  std::vector<double> price_grid;   // sorted, contains 0 and p_max
  RateModel rates;
  EmptyStateBoundary boundary = EmptyStateBoundary::kReflecting;

  /// Uniform grid of `points` prices on [0, p_max].
  static MdpSpec uniform(int capacity, RateModel rates, std::size_t points = 1000);

  std::size_t state_count() const noexcept { return static_cast<std::size_t>(capacity) + 1; }
  double null_price() const noexcept { return rates.null_price; }
};

/// Throws InvalidArgument when the spec breaks its invariants.
void validate(const MdpSpec& spec);

/// Price advertised in each state n = 0..K.
struct Policy {
  std::vector<double> prices;
};

void validate(const MdpSpec& spec, const Policy& policy);

struct DpSolution {
  double gain = 0.0;                    // J*, average revenue per unit time
  std::vector<double> relative_reward;  // h_n with h_K = 0
  Policy policy;
  int iterations = 0;
  bool converged = false;
  double bellman_residual = 0.0;
};

struct DpOptions {
  double tolerance = 1e-9;
  int max_iterations = 1000000;
  /// Self-loop weight of the aperiodicity transform used by value iteration.
  double aperiodicity = 0.5;
};

/// U = max over the grid of lambda(p) + delta(p).
double uniformization_rate(const MdpSpec& spec);

/// Birth-death product form pi_n proportional to prod_{i<n} lambda_i / delta_{i+1}.
std::vector<double> steady_state(const MdpSpec& spec, const Policy& policy);

/// J = sum_n pi_n n p_n.
double average_revenue(const MdpSpec& spec, const Policy& policy);

/// n p + (lambda/U) h_{n+1} + (delta/U) h_{n-1} + (1 - (lambda+delta)/U) h_n,
/// with h_{K+1} = h_K and the spec's empty-state boundary for h_{-1}.
double bellman_backup(const MdpSpec& spec, int state, const std::vector<double>& h, double price);

struct PolicyEvaluation {
  double gain = 0.0;
  std::vector<double> relative_reward;
};

/// Solves J + h_n = backup(n, h, p_n) for all n with h_K = 0.
PolicyEvaluation evaluate_policy(const MdpSpec& spec, const Policy& policy);

/// Greedy policy w.r.t. h; ties broken toward the lowest price.
Policy greedy_policy(const MdpSpec& spec, const std::vector<double>& h);

/// max_n |J + h_n - max_p backup(n, h, p)|.
double bellman_residual(const MdpSpec& spec, double gain, const std::vector<double>& h);

DpSolution policy_iteration(const MdpSpec& spec, const DpOptions& opts = {});
DpSolution relative_value_iteration(const MdpSpec& spec, const DpOptions& opts = {});

struct StructureReport {
  bool h_monotone = true;
  bool h_concave = true;
  bool price_monotone = true;
  std::vector<std::string> violations;
};

/// Checks h non-decreasing, h concave and prices non-decreasing in n, each
/// with `slack` tolerance. Throws InvalidArgument on unconverged input.
StructureReport verify_structure(const DpSolution& sol, double slack = 1e-9);

/// The numerical-study instance: lambda(p) = 24 - 1.5 p^2, p_max = 4 and
/// departure rate coefficient * p^exponent.
MdpSpec reference_instance(double departure_coefficient, int departure_exponent, int capacity = 100,
                           std::size_t grid_points = 1000);

}  // namespace spottransit
