#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace spottransit {

struct TrafficSeries {
  std::int64_t start_time = 0;  // UTC seconds
  std::int64_t step = 300;      // seconds between samples
  std::vector<double> values;   // Gbps
  std::size_t gaps_filled = 0;  // samples restored by linear interpolation
};

/// Reads "timestamp_seconds,gbps" rows (optional header line) or bare gbps
/// rows. Comment lines start with '#'; "# step=<seconds>" declares the
/// sampling step for bare rows. Missing slots are linearly interpolated.
TrafficSeries parse_series(std::istream& in);
TrafficSeries load_series(const std::filesystem::path& path);

/// Nearest-rank 95th percentile: element ceil(0.95 n) (1-based) of the sorted
/// samples.
double percentile_95(const TrafficSeries& s);

/// Persistence forecast D_t = D_{t - window}. Entry i of the result predicts
/// observation i + window/step.
std::vector<double> predict_persistence(const TrafficSeries& s, std::int64_t window_seconds = 604800);

struct PredictionReport {
  double residual_mean = 0.0;
  double residual_sd = 0.0;
  std::size_t residual_count = 0;
  /// (standard normal quantile at k/(n+1), k-th smallest standardized residual)
  std::vector<std::pair<double, double>> qq_points;
  bool degenerate_qq = false;  // residual sd is zero; no Q-Q data
};

PredictionReport prediction_errors(const TrafficSeries& s, std::int64_t window_seconds = 604800);

}  // namespace spottransit
