#pragma once

// Mie reflection coefficients of a homogeneous non-magnetic sphere at imaginary frequency.
//
// a_l (TM) and b_l (TE) follow the imaginary-frequency form with prefactor (-1)^{l+1} pi/2.
// With x = kR and n = sqrt(eps(i c k)) the ratios of Riccati functions are rewritten through
//   f(z) = z psi'(z)/psi(z) = l + 1 + g(z),  g(z) = z i_{l+1}(z)/i_l(z),
//   h(x) = x xi'(x)/xi(x)   = -l - x k_{l-1}(x)/k_l(x),
// which removes every e^{+-x} and e^{+-nx} factor and the cancellation between n psi'(x) and
// psi'(nx) that otherwise ruins the TE coefficient of a good conductor at small kR:
//   a_l = (-1)^{l+1} (pi/2) (psi_l/xi_l)(x) [(n^2-1)(l+1) + n^2 g(x) - g(nx)] / [n^2 h(x) - f(nx)]
//   b_l = (-1)^{l+1} (pi/2) (psi_l/xi_l)(x) [g(x) - g(nx)] / [h(x) - f(nx)]
// The perfect conductor is the n -> infinity limit, evaluated as its own branch.

#include "casimir/material.hpp"
#include "casimir/scaled.hpp"

#include <string>
#include <vector>

namespace casimir::mie {

struct MiePair {
  int l = 1;
  double kR = 0.0;
  ScaledReal a; ///< TM
  ScaledReal b; ///< TE
};

/// a_l, b_l for l = 1..lmax. `k` is the wave number in the material's length unit (xi = c k).
std::vector<MiePair> mie_sequence(const Material& material, int lmax, double kR, double k);

MiePair mie_coefficients(const Material& material, int l, double kR, double k);

/// Leading small-kR behaviour a_l ~ tm (kR)^{2l+1}, b_l ~ te (kR)^{2l+1}.
/// The TE limit of a Drude sphere is zero (its leading power is (kR)^{2l+2}).
struct StaticLimit {
  ScaledReal tm;
  ScaledReal te;
};

StaticLimit static_limit(const Material& material, int l);

/// Truncated small-kR series of the dipole coefficients, exactly as
///   PEC:   a = -(2/3)x^3 + (1/5)x^5,             b = (1/3)x^3 + (1/5)x^5
///   Drude: a = -(2/3)x^3 + (2c/(sigma0 R)) x^4,   b = (R sigma0/45c) x^4 - (1/45)[(2/21)(sigma0 R/c)^2 + sigma0/gamma] x^5
/// Only l = 1 and kR < 0.1 are supported. `radius` is R in the material's length unit.
MiePair mie_expansion(const Material& material, int l, double kR, double radius);

enum class Regime { Rayleigh, Dipole, Multipole };

std::string to_string(Regime regime);

struct RegimeThresholds {
  double rayleigh = 0.05;  ///< Rayleigh while |b_1/a_1| stays below this
  double multipole = 0.05; ///< Multipole once |a_2/a_1| exceeds this
};

struct DipoleRatios {
  double minus_b1_over_a1 = 0.0;
  double a2_over_a1 = 0.0;
  Regime regime = Regime::Rayleigh;
};

DipoleRatios dipole_ratios(const Material& material, double radius, double kR,
                           const RegimeThresholds& thresholds = {});

Regime regime_classify(const Material& material, double radius, double kR,
                       const RegimeThresholds& thresholds = {});

struct RayleighValidity {
  bool valid = false;
  double te_parameter = 0.0;        ///< R sigma0 / (30 c)
  double distance_ratio = 0.0;      ///< d / R
  double ratio = 0.0;               ///< te_parameter / distance_ratio
  double radius_over_skin_depth = 0.0; ///< R / (sqrt(15) delta) at omega = c/d
};

/// TE scattering is negligible when R sigma0/(30c) << d/R; "<<" means ratio < margin.
RayleighValidity rayleigh_validity(const Material& material, double radius, double distance,
                                   double margin = 0.1);

} // namespace casimir::mie
