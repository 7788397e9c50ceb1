#pragma once

#include <string_view>
#include <variant>

namespace spottransit {

// Prices are in $/Mbps and demand in Gbps everywhere in the library.

/// d(p) = v * p^-alpha, constant elasticity alpha.
struct IsoElasticDemand {
  double base;        // v
  double elasticity;  // alpha > 1

  friend bool operator==(const IsoElasticDemand&, const IsoElasticDemand&) = default;
};

/// d(p) = v - alpha * p on [0, v / alpha].
struct LinearDemand {
  double base;         // v
  double sensitivity;  // alpha > 0

  friend bool operator==(const LinearDemand&, const LinearDemand&) = default;
};

enum class DemandKind { kIsoElastic, kLinear };

DemandKind parse_demand_kind(std::string_view text);
std::string_view to_string(DemandKind kind);

/// A validated demand curve. Downstream code consumes it only through
/// eval_demand / eval_slope / elasticity / inverse_demand.
class DemandSpec {
 public:
  static DemandSpec iso_elastic(double base, double elasticity);
  static DemandSpec linear(double base, double sensitivity);

  DemandKind kind() const noexcept;
  double base() const noexcept;
  /// Elasticity constant (iso-elastic) or slope magnitude (linear).
  double alpha() const noexcept;

  /// Upper end of the price domain; infinity for iso-elastic curves.
  double max_price() const noexcept;
  bool in_domain(double price) const noexcept;

  const std::variant<IsoElasticDemand, LinearDemand>& curve() const noexcept { return curve_; }

  friend bool operator==(const DemandSpec&, const DemandSpec&) = default;

 private:
  explicit DemandSpec(std::variant<IsoElasticDemand, LinearDemand> c) : curve_(c) {}
  std::variant<IsoElasticDemand, LinearDemand> curve_;
};

/// Throws DomainError outside the curve's domain (no clamping).
double eval_demand(const DemandSpec& d, double price);
double eval_slope(const DemandSpec& d, double price);
/// sigma(p) = -p d'(p) / d(p). Throws DomainError where d(p) = 0.
double elasticity(const DemandSpec& d, double price);
/// Price at which d(p) = quantity. Throws DomainError if unreachable.
double inverse_demand(const DemandSpec& d, double quantity);

}  // namespace spottransit
