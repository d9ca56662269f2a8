#pragma once

#include <string>

namespace casimir {

enum class MaterialKind { PerfectConductor, Drude };

/// Dielectric response of a scatterer at imaginary frequency.
///
/// Frequencies are expressed in units of c / L for whatever length unit L the caller works
/// in (the sphere-sphere code uses the center-to-center distance, Mie tables use the radius).
/// `rescaled` converts between length units.
class Material {
public:
  static Material perfect_conductor();
  /// Drude metal with plasma frequency and damping constant (both in units of c / L).
  static Material drude(double plasma_frequency, double damping);
  /// Drude metal from the groups omega_P L / (2 pi c) and gamma L / c.
  static Material drude_from_groups(double plasma_over_2pi, double damping);

  [[nodiscard]] MaterialKind kind() const { return kind_; }
  [[nodiscard]] bool is_perfect_conductor() const { return kind_ == MaterialKind::PerfectConductor; }
  [[nodiscard]] double plasma_frequency() const { return plasma_; }
  [[nodiscard]] double damping() const { return damping_; }
  /// sigma_0 = omega_P^2 / gamma
  [[nodiscard]] double dc_conductivity() const;

  /// epsilon(i xi) - 1 = omega_P^2 / (xi (xi + gamma)); infinite for a perfect conductor.
  [[nodiscard]] double susceptibility(double xi) const;
  [[nodiscard]] double permittivity(double xi) const { return 1.0 + susceptibility(xi); }

  /// Same material expressed with length unit L' = factor * L.
  [[nodiscard]] Material rescaled(double factor) const;

  [[nodiscard]] std::string describe() const;

private:
  Material(MaterialKind kind, double plasma, double damping)
      : kind_(kind), plasma_(plasma), damping_(damping) {}

  MaterialKind kind_;
  double plasma_;
  double damping_;
};

} // namespace casimir
