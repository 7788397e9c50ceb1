#include "spottransit/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "spottransit/error.hpp"

namespace spottransit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Row {
  std::optional<double> timestamp;
  double value;
  std::size_t line;
};

}  // namespace

TrafficSeries parse_series(std::istream& in) {
  std::int64_t declared_step = 300;
  bool step_declared = false;
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool saw_data_or_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto pos = view.find("step=");
      if (pos != std::string_view::npos) {
        const auto step = to_double(view.substr(pos + 5));
        if (!step || !(*step > 0.0) || *step != std::floor(*step)) {
          throw ParseError("line " + std::to_string(line_no) + ": invalid step declaration");
        }
        declared_step = static_cast<std::int64_t>(*step);
        step_declared = true;
      }
      continue;
    }
    const auto comma = view.find(',');
    Row row{std::nullopt, 0.0, line_no};
    std::optional<double> value;
    if (comma == std::string_view::npos) {
      value = to_double(view);
    } else {
      row.timestamp = to_double(view.substr(0, comma));
      value = to_double(view.substr(comma + 1));
      if (!row.timestamp) value.reset();
    }
    if (!value) {
      // A non-numeric first line is a header.
      if (!saw_data_or_header && rows.empty()) {
        saw_data_or_header = true;
        continue;
      }
      throw ParseError("line " + std::to_string(line_no) + ": cannot parse row '" +
                       std::string(view) + "'");
    }
    if (*value < 0.0) {
      throw ParseError("line " + std::to_string(line_no) + ": negative traffic value");
    }
    if (!rows.empty() && rows.front().timestamp.has_value() != row.timestamp.has_value()) {
      throw ParseError("line " + std::to_string(line_no) + ": mixed timestamped and bare rows");
    }
    saw_data_or_header = true;
    row.value = *value;
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("traffic series is empty");

  TrafficSeries s;
  if (!rows.front().timestamp) {
    s.step = declared_step;
    s.values.reserve(rows.size());
    for (const auto& r : rows) s.values.push_back(r.value);
    return s;
  }

  // Timestamped rows: the step is declared or inferred as the smallest spacing.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(*rows[i].timestamp > *rows[i - 1].timestamp)) {
      throw ParseError("line " + std::to_string(rows[i].line) + ": timestamps not increasing");
    }
  }
  double step = static_cast<double>(declared_step);
  if (!step_declared && rows.size() > 1) {
    step = *rows[1].timestamp - *rows[0].timestamp;
    for (std::size_t i = 2; i < rows.size(); ++i) {
      step = std::min(step, *rows[i].timestamp - *rows[i - 1].timestamp);
    }
  }
  if (step != std::floor(step) || step <= 0.0) throw ParseError("sampling step must be whole seconds");
  s.start_time = static_cast<std::int64_t>(*rows.front().timestamp);
  s.step = static_cast<std::int64_t>(step);
  s.values.push_back(rows.front().value);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double gap = *rows[i].timestamp - *rows[i - 1].timestamp;
    const double slots = gap / step;
    if (slots != std::floor(slots)) {
      throw ParseError("line " + std::to_string(rows[i].line) +
                       ": timestamp not aligned to the sampling step");
    }
    const auto k = static_cast<std::size_t>(slots);
    for (std::size_t j = 1; j < k; ++j) {
      const double w = static_cast<double>(j) / static_cast<double>(k);
      s.values.push_back((1.0 - w) * rows[i - 1].value + w * rows[i].value);
      ++s.gaps_filled;
    }
    s.values.push_back(rows[i].value);
  }
  if (s.gaps_filled > 0) {
    std::clog << "warning: filled " << s.gaps_filled << " missing sample(s) by interpolation\n";
  }
  return s;
}

TrafficSeries load_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open traffic file " + path.string());
  return parse_series(in);
}

double percentile_95(const TrafficSeries& s) {
  if (s.values.empty()) throw InvalidArgument("percentile of an empty series");
  std::vector<double> sorted = s.values;
  const std::size_t n = sorted.size();
  // ceil(0.95 n) in integer arithmetic, 1-based.
  const std::size_t rank = std::max<std::size_t>(1, (95 * n + 99) / 100);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

namespace {

std::size_t lag_samples(const TrafficSeries& s, std::int64_t window_seconds) {
  if (s.step <= 0) throw InvalidArgument("series step must be positive");
  if (window_seconds <= 0) throw InvalidArgument("prediction window must be positive");
  if (window_seconds % s.step != 0) {
    throw InvalidArgument("prediction window is not a multiple of the sampling step");
  }
  const auto lag = static_cast<std::size_t>(window_seconds / s.step);
  if (s.values.size() < 2 * lag) {
    throw InvalidArgument("series too short: need at least two prediction windows");
  }
  return lag;
}

}  // namespace

std::vector<double> predict_persistence(const TrafficSeries& s, std::int64_t window_seconds) {
  const std::size_t lag = lag_samples(s, window_seconds);
  return std::vector<double>(s.values.begin(), s.values.end() - static_cast<std::ptrdiff_t>(lag));
}

PredictionReport prediction_errors(const TrafficSeries& s, std::int64_t window_seconds) {
  const std::size_t lag = lag_samples(s, window_seconds);
  const auto predicted = predict_persistence(s, window_seconds);
  std::vector<double> residuals(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) residuals[i] = s.values[i + lag] - predicted[i];

  PredictionReport r;
  r.residual_count = residuals.size();
  const double n = static_cast<double>(residuals.size());
  r.residual_mean = std::accumulate(residuals.begin(), residuals.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : residuals) ss += (e - r.residual_mean) * (e - r.residual_mean);
  r.residual_sd = residuals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  if (!(r.residual_sd > 0.0)) {
    r.degenerate_qq = true;
    return r;
  }
  std::sort(residuals.begin(), residuals.end());
  const boost::math::normal_distribution<double> standard;
  r.qq_points.reserve(residuals.size());
  for (std::size_t k = 1; k <= residuals.size(); ++k) {
    const double q = boost::math::quantile(standard, static_cast<double>(k) / (n + 1.0));
    r.qq_points.emplace_back(q, (residuals[k - 1] - r.residual_mean) / r.residual_sd);
  }
  return r;
}

}  // namespace spottransit
