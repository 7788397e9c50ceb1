#include "spottransit/dynamic_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "spottransit/error.hpp"

namespace spottransit {

double Polynomial::operator()(double p) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * p + *it;
  return acc;
}

double RateModel::arrival_rate(double p) const noexcept { return std::max(0.0, arrival(p)); }
double RateModel::departure_rate(double p) const noexcept { return departure(p); }

MdpSpec MdpSpec::uniform(int capacity, RateModel rates, std::size_t points) {
  if (points < 2) throw InvalidArgument("price grid needs at least two points");
  MdpSpec spec;
  spec.capacity = capacity;
  spec.rates = std::move(rates);
  spec.price_grid.resize(points);
  const double pmax = spec.rates.null_price;
  for (std::size_t i = 0; i < points; ++i) {
    spec.price_grid[i] = pmax * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  spec.price_grid.back() = pmax;
  return spec;
}

MdpSpec reference_instance(double departure_coefficient, int departure_exponent, int capacity,
                           std::size_t grid_points) {
  if (departure_exponent < 0) throw InvalidArgument("departure exponent must be >= 0");
  RateModel rates;
  rates.arrival.coeffs = {24.0, 0.0, -1.5};
  rates.departure.coeffs.assign(static_cast<std::size_t>(departure_exponent) + 1, 0.0);
  rates.departure.coeffs.back() = departure_coefficient;
  rates.null_price = 4.0;
  return MdpSpec::uniform(capacity, std::move(rates), grid_points);
}

void validate(const MdpSpec& spec) {
  if (spec.capacity < 1) throw InvalidArgument("MDP capacity K must be >= 1");
  const auto& grid = spec.price_grid;
  if (grid.size() < 2) throw InvalidArgument("price grid needs at least two prices");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("price grid must be sorted");
  const double pmax = spec.rates.null_price;
  if (!(pmax > 0.0)) throw InvalidArgument("null price p_max must be > 0");
  if (grid.front() != 0.0) throw InvalidArgument("price grid must start at 0");
  if (std::abs(grid.back() - pmax) > 1e-12 * pmax) throw InvalidArgument("price grid must end at p_max");
  if (spec.rates.arrival_rate(pmax) > 1e-12) {
    throw InvalidArgument("arrival rate must vanish at the null price");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    const double dep = spec.rates.departure_rate(p);
    if (p > 0.0 && !(dep > 0.0)) {
      throw InvalidArgument("departure rate must be positive for p > 0 (p=" + std::to_string(p) + ")");
    }
    if (dep < 0.0) throw InvalidArgument("departure rate must be non-negative");
    if (i > 0) {
      if (spec.rates.arrival_rate(p) > spec.rates.arrival_rate(grid[i - 1]) + 1e-12) {
        throw InvalidArgument("arrival rate must be non-increasing in price");
      }
      if (dep < spec.rates.departure_rate(grid[i - 1]) - 1e-12) {
        throw InvalidArgument("departure rate must be non-decreasing in price");
      }
    }
  }
}

void validate(const MdpSpec& spec, const Policy& policy) {
  if (policy.prices.size() != spec.state_count()) {
    throw InvalidArgument("policy needs one price per state (" + std::to_string(spec.state_count()) + ")");
  }
  const double pmax = spec.null_price();
  const double eps = 1e-12 * std::max(1.0, pmax);
  for (std::size_t n = 0; n < policy.prices.size(); ++n) {
    const double p = policy.prices[n];
    auto it = std::lower_bound(spec.price_grid.begin(), spec.price_grid.end(), p - eps);
    if (it == spec.price_grid.end() || std::abs(*it - p) > eps) {
      throw InvalidArgument("policy price " + std::to_string(p) + " at state " + std::to_string(n) +
                            " is not on the price grid");
    }
  }
  if (std::abs(policy.prices.back() - pmax) > eps) {
    throw InvalidArgument("policy must charge the null price at full capacity");
  }
}

double uniformization_rate(const MdpSpec& spec) {
  if (spec.price_grid.empty()) throw InvalidArgument("price grid is empty");
  double u = 0.0;
  for (double p : spec.price_grid) {
    u = std::max(u, spec.rates.arrival_rate(p) + spec.rates.departure_rate(p));
  }
  if (!(u > 0.0)) throw InvalidArgument("all transition rates are zero on the price grid");
  return u;
}

std::vector<double> steady_state(const MdpSpec& spec, const Policy& policy) {
  validate(spec, policy);
  const std::size_t n_states = spec.state_count();
  auto birth = [&](std::size_t n) { return spec.rates.arrival_rate(policy.prices[n]); };
  auto death = [&](std::size_t n) { return spec.rates.departure_rate(policy.prices[n]); };

  // States below the highest state that cannot move down are transient, as
  // long as every one of them can still move up.
  std::size_t floor_state = 0;
  for (std::size_t n = 1; n < n_states; ++n) {
    if (!(death(n) > 0.0)) floor_state = n;
  }
  for (std::size_t n = 0; n < floor_state; ++n) {
    if (!(birth(n) > 0.0)) {
      throw DomainError("policy has more than one recurrent class (state " + std::to_string(n) +
                        " can neither rise nor fall)");
    }
  }

  // Unnormalized weights in log space; the products overflow for large K.
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_w(n_states, neg_inf);
  log_w[floor_state] = 0.0;
  for (std::size_t n = floor_state + 1; n < n_states; ++n) {
    if (!std::isfinite(log_w[n - 1]) || birth(n - 1) == 0.0) break;
    log_w[n] = log_w[n - 1] + std::log(birth(n - 1)) - std::log(death(n));
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> pi(n_states);
  double total = 0.0;
  for (std::size_t n = 0; n < n_states; ++n) {
    pi[n] = std::isfinite(log_w[n]) ? std::exp(log_w[n] - top) : 0.0;
    total += pi[n];
  }
  for (double& x : pi) x /= total;
  return pi;
}

double average_revenue(const MdpSpec& spec, const Policy& policy) {
  const auto pi = steady_state(spec, policy);
  double j = 0.0;
  for (std::size_t n = 0; n < pi.size(); ++n) j += pi[n] * static_cast<double>(n) * policy.prices[n];
  return j;
}

namespace {

struct Backup {
  double reward;
  double up;    // weight on h_{n+1}
  double down;  // weight on h_{n-1}
  double stay;  // weight on h_n
};

Backup transition(const MdpSpec& spec, double u, int n, double price) {
  const double lam = spec.rates.arrival_rate(price) / u;
  const double del = spec.rates.departure_rate(price) / u;
  return {static_cast<double>(n) * price, lam, del, 1.0 - lam - del};
}

double apply(const MdpSpec& spec, const Backup& b, int n, const std::vector<double>& h) {
  const auto k = static_cast<std::size_t>(n);
  const double h_up = n == spec.capacity ? h[k] : h[k + 1];
  double h_down = 0.0;
  if (n > 0) {
    h_down = h[k - 1];
  } else if (spec.boundary == EmptyStateBoundary::kReflecting) {
    h_down = h[0];
  }
  return b.reward + b.up * h_up + b.down * h_down + b.stay * h[k];
}

// Bellman maximization at state n; returns (best value, best grid index).
std::pair<double, std::size_t> best_action(const MdpSpec& spec, double u, int n,
                                           const std::vector<double>& h) {
  if (n == spec.capacity) {
    const std::size_t last = spec.price_grid.size() - 1;
    return {apply(spec, transition(spec, u, n, spec.price_grid[last]), n, h), last};
  }
  std::vector<double> q(spec.price_grid.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = apply(spec, transition(spec, u, n, spec.price_grid[i]), n, h);
    best = std::max(best, q[i]);
  }
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= best - tie) return {q[i], i};
  }
  return {best, 0};
}

}  // namespace

double bellman_backup(const MdpSpec& spec, int state, const std::vector<double>& h, double price) {
  if (state < 0 || state > spec.capacity) {
    throw InvalidArgument("state " + std::to_string(state) + " outside 0.." + std::to_string(spec.capacity));
  }
  if (h.size() != spec.state_count()) throw InvalidArgument("relative reward vector has wrong size");
  if (state == spec.capacity && std::abs(price - spec.null_price()) > 1e-12 * spec.null_price()) {
    throw InvalidArgument("full-capacity state must charge the null price");
  }
  return apply(spec, transition(spec, uniformization_rate(spec), state, price), state, h);
}

PolicyEvaluation evaluate_policy(const MdpSpec& spec, const Policy& policy) {
  validate(spec, policy);
  const double u = uniformization_rate(spec);
  const int k = spec.capacity;
  const Eigen::Index dim = k + 2;  // J, h_0..h_K
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  for (int n = 0; n <= k; ++n) {
    const Backup t = transition(spec, u, n, policy.prices[static_cast<std::size_t>(n)]);
    const Eigen::Index row = n;
    const Eigen::Index hn = n + 1;
    a(row, 0) = 1.0;
    a(row, hn) += 1.0 - t.stay;
    a(row, n == k ? hn : hn + 1) -= t.up;
    if (n > 0) {
      a(row, hn - 1) -= t.down;
    } else if (spec.boundary == EmptyStateBoundary::kReflecting) {
      a(row, hn) -= t.down;
    }
    b(row) = t.reward;
  }
  a(k + 1, k + 1) = 1.0;  // h_K = 0

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw NoSolution("policy evaluation system is singular; rates are degenerate");
  }
  const Eigen::VectorXd x = lu.solve(b);
  PolicyEvaluation out;
  out.gain = x(0);
  out.relative_reward.assign(x.data() + 1, x.data() + dim);
  return out;
}

Policy greedy_policy(const MdpSpec& spec, const std::vector<double>& h) {
  if (h.size() != spec.state_count()) throw InvalidArgument("relative reward vector has wrong size");
  const double u = uniformization_rate(spec);
  Policy p;
  p.prices.resize(spec.state_count());
  for (int n = 0; n <= spec.capacity; ++n) {
    p.prices[static_cast<std::size_t>(n)] = spec.price_grid[best_action(spec, u, n, h).second];
  }
  return p;
}

double bellman_residual(const MdpSpec& spec, double gain, const std::vector<double>& h) {
  const double u = uniformization_rate(spec);
  double worst = 0.0;
  for (int n = 0; n <= spec.capacity; ++n) {
    const double best = best_action(spec, u, n, h).first;
    worst = std::max(worst, std::abs(gain + h[static_cast<std::size_t>(n)] - best));
  }
  return worst;
}

DpSolution policy_iteration(const MdpSpec& spec, const DpOptions& opts) {
  validate(spec);
  Policy policy;
  policy.prices.assign(spec.state_count(), spec.price_grid.front());
  policy.prices.back() = spec.price_grid.back();

  // Price 0 everywhere freezes the chain when nothing departs at price 0 and
  // nothing arrives; start from the null price instead in that case.
  std::optional<PolicyEvaluation> first;
  try {
    first = evaluate_policy(spec, policy);
  } catch (const NoSolution&) {
    policy.prices.assign(spec.state_count(), spec.price_grid.back());
    policy.prices.front() = spec.price_grid.front();
  }

  DpSolution sol;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    auto eval = first ? std::move(*first) : evaluate_policy(spec, policy);
    first.reset();
    Policy next = greedy_policy(spec, eval.relative_reward);
    // Howard's rule: a state only switches price on strict improvement, so
    // exact ties cannot cycle or walk into a frozen chain.
    for (int n = 0; n <= spec.capacity; ++n) {
      const auto k = static_cast<std::size_t>(n);
      const double keep = bellman_backup(spec, n, eval.relative_reward, policy.prices[k]);
      const double swap = bellman_backup(spec, n, eval.relative_reward, next.prices[k]);
      if (swap <= keep + 1e-12 * std::max(1.0, std::abs(swap))) next.prices[k] = policy.prices[k];
    }
    sol.iterations = it;
    sol.gain = eval.gain;
    sol.relative_reward = std::move(eval.relative_reward);
    if (next.prices == policy.prices) {
      sol.converged = true;
      break;
    }
    policy = std::move(next);
  }
  sol.policy = std::move(policy);
  sol.bellman_residual = bellman_residual(spec, sol.gain, sol.relative_reward);
  if (!sol.converged) throw ConvergenceError("policy iteration exceeded the iteration limit");
  return sol;
}

DpSolution relative_value_iteration(const MdpSpec& spec, const DpOptions& opts) {
  validate(spec);
  if (!(opts.aperiodicity > 0.0 && opts.aperiodicity < 1.0)) {
    throw InvalidArgument("aperiodicity weight must lie in (0, 1)");
  }
  const double u = uniformization_rate(spec);
  const double tau = opts.aperiodicity;
  const std::size_t n_states = spec.state_count();
  const std::size_t ref = n_states - 1;

  // Iterate w <- tau w + (1 - tau) T w, renormalized so w_K = 0. The
  // transformed chain is aperiodic, shares the relative rewards of the
  // original one and has gain (1 - tau) J.
  std::vector<double> w(n_states, 0.0);
  std::vector<double> next(n_states);
  DpSolution sol;
  double lo = 0.0;
  double hi = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (int n = 0; n <= spec.capacity; ++n) {
      const auto k = static_cast<std::size_t>(n);
      next[k] = tau * w[k] + (1.0 - tau) * best_action(spec, u, n, w).first;
      lo = std::min(lo, next[k] - w[k]);
      hi = std::max(hi, next[k] - w[k]);
    }
    const double shift = next[ref];
    for (std::size_t k = 0; k < n_states; ++k) w[k] = next[k] - shift;
    sol.iterations = it;
    if (hi - lo < opts.tolerance * (1.0 - tau)) {
      sol.converged = true;
      break;
    }
  }
  sol.gain = 0.5 * (lo + hi) / (1.0 - tau);
  sol.relative_reward = w;
  sol.policy = greedy_policy(spec, w);
  sol.bellman_residual = bellman_residual(spec, sol.gain, w);
  if (!sol.converged) throw ConvergenceError("relative value iteration exceeded the iteration limit");
  return sol;
}

StructureReport verify_structure(const DpSolution& sol, double slack) {
  if (!sol.converged) throw InvalidArgument("structure check needs a converged solution");
  const auto& h = sol.relative_reward;
  const auto& p = sol.policy.prices;
  StructureReport r;
  for (std::size_t n = 0; n + 1 < h.size(); ++n) {
    if (h[n + 1] < h[n] - slack) {
      r.h_monotone = false;
      r.violations.push_back("h decreases at n=" + std::to_string(n));
    }
  }
  for (std::size_t n = 1; n + 1 < h.size(); ++n) {
    if (h[n + 1] - h[n] > h[n] - h[n - 1] + slack) {
      r.h_concave = false;
      r.violations.push_back("h not concave at n=" + std::to_string(n));
    }
  }
  for (std::size_t n = 1; n < p.size(); ++n) {
    if (p[n] < p[n - 1] - slack) {
      r.price_monotone = false;
      r.violations.push_back("price decreases at n=" + std::to_string(n));
    }
  }
  return r;
}

}  // namespace spottransit
