#pragma once

// Free energy and entropy per unit area between two identical parallel mirrors.
//
// Lengths in units of the gap d, tau = 2 pi T d, xi_n = n tau. With u = 2 kappa d,
//   F/A = (T/2)(1/2pi) [f(0) + 2 sum_{n>=1} f(xi_n)],
//   f(xi) = int_{2 xi}^inf (u/4) sum_p ln(1 - r_p^2 e^{-u}) du,
// in units of hbar c / d^3; S/A = -2 pi d(F/A)/dtau in units of k_B / d^2.
// Drude Fresnel amplitudes with kappa_m = sqrt(kappa^2 + (eps-1) xi^2):
//   r_TE = -(eps-1) xi^2 / (kappa + kappa_m)^2,  r_TM = (eps kappa - kappa_m)/(eps kappa + kappa_m).
// Perfect mirrors have r_p^2 = 1.

#include "casimir/material.hpp"

namespace casimir::lifshitz {

struct PlanePlaneConfig {
  Material material = Material::perfect_conductor(); ///< frequencies in units of c/d
  double tau = 1.0;
  double quad_tolerance = 1e-10;
  double matsubara_tolerance = 1e-9;
  long max_matsubara = 2000000;
  int threads = 1;
  double fd_step = 1e-3;
};

struct PolarizationSplit {
  double total = 0.0;
  double te = 0.0;
  double tm = 0.0;

  PolarizationSplit& add(const PolarizationSplit& other, double weight);
  PolarizationSplit& scale(double factor);
};

struct PlanePlaneResult {
  double tau = 0.0;
  PolarizationSplit F; ///< per unit area, hbar c / d^3
  PolarizationSplit S; ///< per unit area, k_B / d^2; zero unless produced by pp_entropy
  bool has_entropy = false;
  double err_est = 0.0;
  bool warning = false;
  long n_max = 0;
  double quad_error = 0.0; ///< largest quadrature error estimate of any term
};

/// f(xi) split by polarization.
PolarizationSplit pp_term(const Material& material, double xi, double tolerance, double* error = nullptr);

PlanePlaneResult pp_free_energy(const PlanePlaneConfig& config);
PlanePlaneResult pp_entropy(const PlanePlaneConfig& config);

} // namespace casimir::lifshitz
