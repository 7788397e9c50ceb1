#include "spottransit/uncertainty.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spottransit/error.hpp"

namespace spottransit {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

namespace {

// Gaussian mass between standardized points a <= b, computed on the side of
// the distribution where erfc keeps full relative precision.
double mass_between(double a, double b) {
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_sf(b);
}

}  // namespace

UncertaintyModel::UncertaintyModel(double mean, double sd, double lower, double upper)
    : mean_(mean), sd_(sd), lower_(lower), upper_(upper) {
  if (!std::isfinite(mean)) throw InvalidArgument("noise mean must be finite");
  if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidArgument("noise sd must be positive");
  if (!(lower < upper)) throw InvalidArgument("noise support needs lower < upper");
  mass_ = mass_between((lower - mean) / sd, (upper - mean) / sd);
  if (!(mass_ > 0.0)) throw InvalidArgument("noise support carries no probability mass");
}

UncertaintyModel UncertaintyModel::gaussian(double mean, double sd) {
  return UncertaintyModel(mean, sd, mean - 3.0 * sd, mean + 3.0 * sd);
}

UncertaintyModel UncertaintyModel::truncated(double mean, double sd, double lower, double upper) {
  return UncertaintyModel(mean, sd, lower, upper);
}

double UncertaintyModel::truncated_mean() const noexcept {
  const double a = (lower_ - mean_) / sd_;
  const double b = (upper_ - mean_) / sd_;
  return mean_ + sd_ * (normal_pdf(a) - normal_pdf(b)) / mass_;
}

double density(const UncertaintyModel& u, double x) {
  if (x < u.lower() || x > u.upper()) return 0.0;
  return normal_pdf((x - u.mean()) / u.sd()) / (u.sd() * u.contained_mass());
}

double tail_probability(const UncertaintyModel& u, double t) {
  if (t >= u.upper()) return 0.0;
  if (t <= u.lower()) return 1.0;
  const double z = (t - u.mean()) / u.sd();
  const double b = (u.upper() - u.mean()) / u.sd();
  return mass_between(z, b) / u.contained_mass();
}

double partial_overshoot(const UncertaintyModel& u, double t) {
  if (t >= u.upper()) return 0.0;
  if (t <= u.lower()) return u.truncated_mean() - t;
  // integral_t^B (x - t) phi((x - mu)/s)/s dx
  //   = s (phi(z) - phi(b)) + (mu - t) (Phi(b) - Phi(z))
  const double z = (t - u.mean()) / u.sd();
  const double b = (u.upper() - u.mean()) / u.sd();
  const double raw = u.sd() * (normal_pdf(z) - normal_pdf(b)) + (u.mean() - t) * mass_between(z, b);
  return std::max(0.0, raw / u.contained_mass());
}

double cantelli_bound(const UncertaintyModel& u, double t) {
  if (!(t > u.mean())) {
    throw DomainError("Cantelli bound needs t > mean (got t=" + std::to_string(t) + ")");
  }
  const double var = u.sd() * u.sd();
  const double gap = t - u.mean();
  return var / (var + gap * gap);
}

}  // namespace spottransit
