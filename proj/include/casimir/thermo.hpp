#pragma once

// Matsubara summation for the sphere-sphere free energy and entropy.
//
// Units: hbar = c = k_B = 1, lengths in units of the center-to-center distance d. The reduced
// temperature is tau = 2 pi T d, the Matsubara frequencies are xi_n = n tau, and
//   F = (T/2) [f(0) + 2 sum_{n>=1} f(xi_n)],   f = sum_m g_m Tr ln(1 - M^(m)),   g_0 = 1, g_{m>0} = 2,
// in units of hbar c / d. In single-round-trip modes ln(1 - M) is replaced by -M. The entropy
// S = -dF/dT = -2 pi dF/dtau is in units of k_B.

#include "casimir/material.hpp"
#include "casimir/roundtrip.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace casimir::thermo {

using roundtrip::GeometryConfig;
using roundtrip::RoundTripMode;

struct ThermalConfig {
  double tau = 1.0;
  RoundTripMode mode = RoundTripMode::SingleRoundTrip;
  int lmax = 0; ///< 0 selects a cutoff from the geometry; dipole mode always uses 1
  double matsubara_tolerance = 1e-9;
  double m_tolerance = 1e-9;
  long max_matsubara = 2000000;
  int threads = 1;
  double fd_step = 1e-3; ///< relative step of the temperature derivative
  bool lpair = false;    ///< keep the l-pair channel matrix (single-round-trip modes)
};

/// Multipole cutoff actually used for the given configuration.
int effective_lmax(const GeometryConfig& geometry, const ThermalConfig& config);

/// Free-energy-like quantity resolved by scattering channel.
/// total is the mode's result; srt is the single-round-trip value -sum g_m Tr M, which the
/// channels partition exactly. In full mode total != srt.
struct ChannelValues {
  double total = 0.0;
  double srt = 0.0;
  double tm = 0.0;
  double te = 0.0;
  double mix12 = 0.0; ///< TM on sphere 1, TE on sphere 2
  double mix21 = 0.0;
  Eigen::MatrixXd lpair; ///< lpair(l1 - 1, l2 - 1); empty unless requested

  [[nodiscard]] double mixing() const { return mix12 + mix21; }
  [[nodiscard]] double channel_sum() const { return tm + te + mix12 + mix21; }
  /// Contribution of the unordered pair {l1, l2}.
  [[nodiscard]] double lpair_symmetric(int l1, int l2) const;

  ChannelValues& add(const ChannelValues& other, double weight);
  ChannelValues& scale(double factor);
};

struct MatsubaraPlan {
  long n_max = 0;         ///< last included Matsubara index
  std::vector<int> m_max; ///< m_max[n], n = 0..n_max
};

struct Truncation {
  int lmax = 0;
  long n_max = 0;
  int m_max = 0; ///< largest m used at any n
  double tail_bound = 0.0;
};

struct ChannelReport {
  double tau = 0.0;
  ChannelValues F;
  ChannelValues S; ///< zero unless produced by entropy()
  bool has_entropy = false;
  double err_est = 0.0;
  bool warning = false;
  Truncation truncation;
  double scale6 = 1.0; ///< d^6 / (R1^3 R2^3), (d/R)^6 for identical spheres

  [[nodiscard]] ChannelValues scaled_F() const;
  [[nodiscard]] ChannelValues scaled_S() const;
};

/// f(xi) = sum_m g_m Tr ln(1 - M^(m)) (or -Tr M) at one frequency; xi = 0 gives the static term.
/// m_limit < 0 truncates in m adaptively; the m actually used is returned in m_used.
ChannelValues matsubara_term(const roundtrip::Assembler& assembler, const ThermalConfig& config,
                             double xi, int m_limit, int* m_used = nullptr);

MatsubaraPlan plan_matsubara(const GeometryConfig& geometry, const Material& sphere1,
                             const Material& sphere2, const ThermalConfig& config);

ChannelReport free_energy(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                          const ThermalConfig& config);

ChannelReport entropy(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                      const ThermalConfig& config);

struct HighTemperature {
  double S_HT = 0.0; ///< -f(0)/2 in the configured mode
  double S_TM = 0.0;
  double S_TE = 0.0;
  double S_mix = 0.0;
  double S_HT_P = 0.0;        ///< same geometry and mode with perfectly conducting spheres
  double delta_S_HT_TE = 0.0; ///< TE entropy missing relative to perfect conductors
  [[nodiscard]] double tm_share() const { return S_TM / S_HT; }
  [[nodiscard]] double te_share() const { return S_TE / S_HT; }
  [[nodiscard]] double mix_share() const { return S_mix / S_HT; }
};

HighTemperature ht_asymptotics(const GeometryConfig& geometry, const Material& sphere1,
                               const Material& sphere2, const ThermalConfig& config);

/// Distance scan at fixed tau_R = 2 pi T R for identical spheres. The material is given in units
/// of c/R. Free energies are reported in units of hbar c / R.
struct DistancePoint {
  double d_over_R = 0.0;
  RoundTripMode mode = RoundTripMode::SingleRoundTrip;
  ChannelReport report;
  double rel_diff_to_full = 0.0; ///< (S - S_full)/|S_full| when full mode is part of the scan
};

std::vector<DistancePoint> entropy_distance_scan(const std::vector<double>& d_over_R,
                                                 const Material& material_R, double tau_R,
                                                 const std::vector<RoundTripMode>& modes,
                                                 const ThermalConfig& base);

} // namespace casimir::thermo
