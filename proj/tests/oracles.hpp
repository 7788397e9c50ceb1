// Independent reference computations for the tests. Nothing here calls the
// closed forms under test; integrals go through Boost quadrature.
#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

inline double gaussian_pdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * boost::math::constants::pi<double>()));
}

inline double adaptive(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

/// Truncated Gaussian noise described only by its parameters.
struct Noise {
  double mu, sd, lo, hi;
  double mass;

  Noise(double mu_, double sd_, double lo_, double hi_) : mu(mu_), sd(sd_), lo(lo_), hi(hi_) {
    mass = adaptive([&](double x) { return gaussian_pdf(x, mu, sd); }, lo, hi);
  }
  static Noise three_sigma(double mu, double sd) { return Noise(mu, sd, mu - 3 * sd, mu + 3 * sd); }

  double pdf(double x) const { return x < lo || x > hi ? 0.0 : gaussian_pdf(x, mu, sd) / mass; }
  double tail(double t) const {
    return adaptive([&](double x) { return pdf(x); }, std::max(t, lo), hi);
  }
  double overshoot(double t) const {
    return adaptive([&](double x) { return (x - t) * pdf(x); }, std::max(t, lo), hi);
  }
  /// Cheap fixed-order rule for brute-force sweeps: E[(eps - t)^+].
  double overshoot_fixed(double t) const {
    const double a = std::max(t, lo);
    if (!(hi > a)) return 0.0;
    return boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double x) { return (x - t) * gaussian_pdf(x, mu, sd); }, a, hi) /
           mass;
  }
};

/// erf-based tail of the truncated standard normal.
inline double truncated_tail_erf(double mu, double sd, double lo, double hi, double t) {
  auto Phi = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0))); };
  if (t >= hi) return 0.0;
  if (t <= lo) return 1.0;
  return (Phi(hi) - Phi(t)) / (Phi(hi) - Phi(lo));
}

/// Integral over [p, top] of (x - p) d(x) dx; top = infinity allowed.
inline double surplus(const std::function<double(double)>& demand, double p, double top) {
  auto g = [&](double x) { return (x - p) * demand(x); };
  if (std::isinf(top)) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate([&](double u) { return g(p + u); }, 1e-13);
  }
  return adaptive(g, p, top);
}

/// (p - r) d(p) - m E[(eps - (C - d(p)))^+], with the overshoot by quadrature.
inline double expected_profit(double p, double d, double r, double m, double capacity, const Noise& n,
                              bool fast = false) {
  const double t = capacity - d;
  return (p - r) * d - m * (fast ? n.overshoot_fixed(t) : n.overshoot(t));
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Fifth-order five-point stencil.
inline double five_point(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
