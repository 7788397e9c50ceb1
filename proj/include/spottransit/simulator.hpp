#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spottransit/dynamic_mdp.hpp"

namespace spottransit {

/// Counter-based generator: output i is a SplitMix64 finalization of
/// seed + (i+1) * golden-gamma, so jumping ahead is O(1).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform on (0, 1).
  double uniform() noexcept;
  void discard(std::uint64_t n) noexcept { counter_ += n; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Sub-seed for replication `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct SimConfig {
  MdpSpec spec;
  Policy policy;
  double horizon = 1e5;
  double warmup = 5e3;
  std::uint64_t seed = 0;
  int initial_state = 0;
  int batches = 20;
};

struct SimResult {
  double revenue_rate_estimate = 0.0;
  double revenue_rate_stderr = 0.0;
  std::vector<double> occupancy;         // time fraction per state after warmup
  std::vector<double> occupancy_stderr;  // batch-means stderr per state
  std::uint64_t transitions = 0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Simulates the birth-death chain under `policy`. Revenue accrues at rate
/// n p_n. Throws ConvergenceError if a state n > 0 has zero total rate.
SimResult simulate_policy(const SimConfig& cfg);

/// Runs `count` independent replications in parallel with derived sub-seeds.
std::vector<SimResult> simulate_replications(const SimConfig& cfg, int count);

struct ComparisonReport {
  double analytic_revenue = 0.0;
  double revenue_z = 0.0;
  std::vector<double> occupancy_z;
  double occupancy_tv = 0.0;
  bool pass = false;
  std::string detail;
};

/// Pass iff |z| <= 3 on revenue and total-variation distance <= 0.02.
ComparisonReport compare_to_analytic(const SimResult& result, const MdpSpec& spec,
                                     const Policy& policy);

}  // namespace spottransit
