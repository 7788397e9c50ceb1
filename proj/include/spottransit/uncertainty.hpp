#pragma once

namespace spottransit {

/// Additive demand noise: a Gaussian N(mean, sd^2) truncated to [lower, upper]
/// and renormalized so its density integrates to one on the support.
class UncertaintyModel {
 public:
  /// Support defaults to mean +/- 3 sd.
  static UncertaintyModel gaussian(double mean, double sd);
  static UncertaintyModel truncated(double mean, double sd, double lower, double upper);

  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

  /// Gaussian mass contained in [lower, upper] before renormalization.
  double contained_mass() const noexcept { return mass_; }
  /// Mean of the truncated distribution (equals mean() for symmetric supports).
  double truncated_mean() const noexcept;

  friend bool operator==(const UncertaintyModel&, const UncertaintyModel&) = default;

 private:
  UncertaintyModel(double mean, double sd, double lower, double upper);
  double mean_;
  double sd_;
  double lower_;
  double upper_;
  double mass_;
};

double density(const UncertaintyModel& u, double x);
/// Pr(eps > t).
double tail_probability(const UncertaintyModel& u, double t);
/// E[(eps - t)^+] = integral over [t, B] of (x - t) f(x) dx.
double partial_overshoot(const UncertaintyModel& u, double t);
/// One-sided Chebyshev bound sd^2 / (sd^2 + (t - mean)^2). Requires t > mean.
double cantelli_bound(const UncertaintyModel& u, double t);

/// Standard normal helpers shared with the traffic pipeline.
double normal_pdf(double z);
double normal_cdf(double z);
/// 1 - normal_cdf(z), accurate in the upper tail.
double normal_sf(double z);

}  // namespace spottransit
