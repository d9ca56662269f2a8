#include "casimir/material.hpp"

#include "casimir/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace casimir {

Material Material::perfect_conductor() { return {MaterialKind::PerfectConductor, 0.0, 0.0}; }

Material Material::drude(double plasma_frequency, double damping) {
  if (!(plasma_frequency > 0.0) || !(damping > 0.0) || !std::isfinite(plasma_frequency) ||
      !std::isfinite(damping))
    throw DomainError("Drude material needs positive finite plasma frequency and damping");
  return {MaterialKind::Drude, plasma_frequency, damping};
}

Material Material::drude_from_groups(double plasma_over_2pi, double damping) {
  return drude(2.0 * std::numbers::pi * plasma_over_2pi, damping);
}

double Material::dc_conductivity() const {
  if (is_perfect_conductor()) return std::numeric_limits<double>::infinity();
  return plasma_ * plasma_ / damping_;
}

double Material::susceptibility(double xi) const {
  if (is_perfect_conductor()) return std::numeric_limits<double>::infinity();
  if (!(xi > 0.0)) throw DomainError("permittivity is evaluated at positive imaginary frequency only");
  return plasma_ * plasma_ / (xi * (xi + damping_));
}

Material Material::rescaled(double factor) const {
  if (is_perfect_conductor()) return *this;
  return {kind_, plasma_ * factor, damping_ * factor};
}

std::string Material::describe() const {
  if (is_perfect_conductor()) return "pec";
  std::ostringstream os;
  os.precision(17);
  os << "drude(wp=" << plasma_ << ",gamma=" << damping_ << ")";
  return os.str();
}

} // namespace casimir
