#include "spottransit/demand.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spottransit/error.hpp"

namespace spottransit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_domain(const DemandSpec& d, double price) {
  if (!d.in_domain(price)) {
    throw DomainError("price " + std::to_string(price) + " outside demand domain (0, " +
                      std::to_string(d.max_price()) + "]");
  }
}

}  // namespace

DemandKind parse_demand_kind(std::string_view text) {
  if (text == "iso" || text == "iso-elastic" || text == "isoelastic") return DemandKind::kIsoElastic;
  if (text == "linear") return DemandKind::kLinear;
  throw InvalidArgument("unknown demand kind '" + std::string(text) + "'");
}

std::string_view to_string(DemandKind kind) {
  return kind == DemandKind::kIsoElastic ? "iso" : "linear";
}

DemandSpec DemandSpec::iso_elastic(double base, double elasticity) {
  if (!(base > 0.0) || !std::isfinite(base)) throw InvalidArgument("iso-elastic demand needs v > 0");
  if (!(elasticity > 1.0) || !std::isfinite(elasticity)) {
    throw InvalidArgument("iso-elastic demand needs alpha > 1");
  }
  return DemandSpec(IsoElasticDemand{base, elasticity});
}

DemandSpec DemandSpec::linear(double base, double sensitivity) {
  if (!(base > 0.0) || !std::isfinite(base)) throw InvalidArgument("linear demand needs v > 0");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidArgument("linear demand needs alpha > 0");
  }
  return DemandSpec(LinearDemand{base, sensitivity});
}

DemandKind DemandSpec::kind() const noexcept {
  return std::holds_alternative<IsoElasticDemand>(curve_) ? DemandKind::kIsoElastic
                                                          : DemandKind::kLinear;
}

double DemandSpec::base() const noexcept {
  return std::visit(overloaded{[](const IsoElasticDemand& c) { return c.base; },
                               [](const LinearDemand& c) { return c.base; }},
                    curve_);
}

double DemandSpec::alpha() const noexcept {
  return std::visit(overloaded{[](const IsoElasticDemand& c) { return c.elasticity; },
                               [](const LinearDemand& c) { return c.sensitivity; }},
                    curve_);
}

double DemandSpec::max_price() const noexcept {
  return std::visit(
      overloaded{[](const IsoElasticDemand&) { return std::numeric_limits<double>::infinity(); },
                 [](const LinearDemand& c) { return c.base / c.sensitivity; }},
      curve_);
}

bool DemandSpec::in_domain(double price) const noexcept {
  if (std::isnan(price)) return false;
  return std::visit(overloaded{[&](const IsoElasticDemand&) { return price > 0.0 && std::isfinite(price); },
                               [&](const LinearDemand& c) {
                                 return price >= 0.0 && price <= c.base / c.sensitivity;
                               }},
                    curve_);
}

double eval_demand(const DemandSpec& d, double price) {
  require_domain(d, price);
  return std::visit(
      overloaded{[&](const IsoElasticDemand& c) { return c.base * std::pow(price, -c.elasticity); },
                 [&](const LinearDemand& c) { return std::max(0.0, c.base - c.sensitivity * price); }},
      d.curve());
}

double eval_slope(const DemandSpec& d, double price) {
  require_domain(d, price);
  return std::visit(overloaded{[&](const IsoElasticDemand& c) {
                                 return -c.elasticity * c.base * std::pow(price, -c.elasticity - 1.0);
                               },
                               [](const LinearDemand& c) { return -c.sensitivity; }},
                    d.curve());
}

double elasticity(const DemandSpec& d, double price) {
  require_domain(d, price);
  return std::visit(overloaded{[](const IsoElasticDemand& c) { return c.elasticity; },
                               [&](const LinearDemand& c) {
                                 const double q = c.base - c.sensitivity * price;
                                 if (!(q > 0.0)) {
                                   throw DomainError("elasticity undefined at the choke price");
                                 }
                                 return c.sensitivity * price / q;
                               }},
                    d.curve());
}

double inverse_demand(const DemandSpec& d, double quantity) {
  if (!(quantity > 0.0) || !std::isfinite(quantity)) {
    throw DomainError("inverse demand needs a positive quantity");
  }
  return std::visit(overloaded{[&](const IsoElasticDemand& c) {
                                 return std::pow(c.base / quantity, 1.0 / c.elasticity);
                               },
                               [&](const LinearDemand& c) {
                                 if (quantity > c.base) {
                                   throw DomainError("demand level " + std::to_string(quantity) +
                                                     " exceeds base demand");
                                 }
                                 return (c.base - quantity) / c.sensitivity;
                               }},
                    d.curve());
}

}  // namespace spottransit
