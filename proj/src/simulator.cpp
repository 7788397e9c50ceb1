#include "spottransit/simulator.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include "spottransit/error.hpp"

namespace spottransit {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() noexcept {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ (index + 1) * 0xd1b54a32d192ed03ULL);
}

SimResult simulate_policy(const SimConfig& cfg) {
  validate(cfg.spec);
  validate(cfg.spec, cfg.policy);
  if (!(cfg.horizon > cfg.warmup) || !(cfg.warmup >= 0.0)) {
    throw InvalidArgument("simulation needs horizon > warmup >= 0");
  }
  if (cfg.batches < 2) throw InvalidArgument("batch means needs at least two batches");
  if (cfg.initial_state < 0 || cfg.initial_state > cfg.spec.capacity) {
    throw InvalidArgument("initial state outside 0..K");
  }

  const std::size_t n_states = cfg.spec.state_count();
  std::vector<double> birth(n_states);
  std::vector<double> death(n_states);
  for (std::size_t n = 0; n < n_states; ++n) {
    birth[n] = cfg.spec.rates.arrival_rate(cfg.policy.prices[n]);
    death[n] = n == 0 ? 0.0 : cfg.spec.rates.departure_rate(cfg.policy.prices[n]);
  }

  const auto batches = static_cast<std::size_t>(cfg.batches);
  const double batch_len = (cfg.horizon - cfg.warmup) / static_cast<double>(batches);
  std::vector<double> batch_revenue(batches, 0.0);
  std::vector<std::vector<double>> batch_time(batches, std::vector<double>(n_states, 0.0));

  // Credits the interval [from, to) spent in `state` to the batches it spans.
  auto credit = [&](std::size_t state, double from, double to) {
    from = std::max(from, cfg.warmup);
    to = std::min(to, cfg.horizon);
    const double rate = static_cast<double>(state) * cfg.policy.prices[state];
    if (!(from < to)) return;
    auto b = static_cast<std::size_t>((from - cfg.warmup) / batch_len);
    for (b = std::min(b, batches - 1); b < batches && from < to; ++b) {
      const double end =
          b + 1 == batches ? to : std::min(to, cfg.warmup + batch_len * static_cast<double>(b + 1));
      if (end <= from) continue;
      batch_time[b][state] += end - from;
      batch_revenue[b] += rate * (end - from);
      from = end;
    }
  };

  CounterRng rng(cfg.seed);
  SimResult out;
  auto state = static_cast<std::size_t>(cfg.initial_state);
  double t = 0.0;
  while (t < cfg.horizon) {
    const double total = birth[state] + death[state];
    if (!(total > 0.0)) {
      if (state > 0) {
        throw ConvergenceError("simulation stuck: zero total rate in state " + std::to_string(state));
      }
      credit(state, t, cfg.horizon);
      break;
    }
    const double sojourn = -std::log(rng.uniform()) / total;
    credit(state, t, t + sojourn);
    t += sojourn;
    if (t >= cfg.horizon) break;
    state = rng.uniform() * total < birth[state] ? state + 1 : state - 1;
    ++out.transitions;
  }

  const double nb = static_cast<double>(batches);
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = batch_revenue[b] / batch_len;
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= nb;
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  out.revenue_rate_estimate = mean;
  out.revenue_rate_stderr = std::sqrt(ss / (nb - 1.0) / nb);

  out.occupancy.assign(n_states, 0.0);
  out.occupancy_stderr.assign(n_states, 0.0);
  for (std::size_t n = 0; n < n_states; ++n) {
    double s = 0.0;
    for (std::size_t b = 0; b < batches; ++b) s += batch_time[b][n] / batch_len;
    const double occ = s / nb;
    double var = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      const double d = batch_time[b][n] / batch_len - occ;
      var += d * d;
    }
    out.occupancy[n] = occ;
    out.occupancy_stderr[n] = std::sqrt(var / (nb - 1.0) / nb);
  }
  return out;
}

std::vector<SimResult> simulate_replications(const SimConfig& cfg, int count) {
  if (count < 1) throw InvalidArgument("replication count must be >= 1");
  std::vector<std::future<SimResult>> jobs;
  jobs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SimConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    jobs.push_back(std::async(std::launch::async, [sub] { return simulate_policy(sub); }));
  }
  std::vector<SimResult> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

ComparisonReport compare_to_analytic(const SimResult& result, const MdpSpec& spec,
                                     const Policy& policy) {
  ComparisonReport r;
  const auto pi = steady_state(spec, policy);
  r.analytic_revenue = average_revenue(spec, policy);
  const double diff = result.revenue_rate_estimate - r.analytic_revenue;
  auto z_score = [](double d, double se) {
    if (se > 0.0) return d / se;
    return d == 0.0 ? 0.0 : std::copysign(INFINITY, d);
  };
  r.revenue_z = z_score(diff, result.revenue_rate_stderr);

  const std::size_t n = std::min(pi.size(), result.occupancy.size());
  r.occupancy_z.assign(n, 0.0);
  double tv = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = result.occupancy[k] - pi[k];
    const double se = k < result.occupancy_stderr.size() ? result.occupancy_stderr[k] : 0.0;
    r.occupancy_z[k] = std::abs(d) < 1e-15 ? 0.0 : z_score(d, se);
    tv += std::abs(d);
  }
  if (pi.size() != result.occupancy.size()) tv = 2.0;
  r.occupancy_tv = 0.5 * tv;

  const bool revenue_ok = std::abs(r.revenue_z) <= 3.0;
  const bool occupancy_ok = r.occupancy_tv <= 0.02;
  r.pass = revenue_ok && occupancy_ok;
  std::ostringstream os;
  os << "revenue " << result.revenue_rate_estimate << " vs analytic " << r.analytic_revenue
     << " (z=" << r.revenue_z << (revenue_ok ? ", ok" : ", MISMATCH") << "); occupancy TV "
     << r.occupancy_tv << (occupancy_ok ? " (ok)" : " (MISMATCH)");
  r.detail = os.str();
  return r;
}

}  // namespace spottransit
