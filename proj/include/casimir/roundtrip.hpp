#pragma once

// Round-trip operator M^(m)(xi) = R_1 T_12 R_2 T_21 for two spheres on the z axis.
//
// Index space: (polarization, l) with l in [max(1, m), lmax], TE block first, then TM.
// Lengths are in units of the center-to-center distance d, frequencies in units of c/d.
//
// Two similarity transforms are applied before anything is materialized; neither changes the
// trace, the determinant or the spectrum:
//  * phase folding: the factors (+-i)^{l1-l2} of the two legs combine into diag(i^l) M diag(i^-l)
//    times a real sign (-1)^{l'-l''} on the return leg, so every stored entry is real;
//  * balanced scaling: with R_i = S_i |R_i| (S_i the signs) the stored operator is
//      M = (S_1 |R_1|^{1/2} T_12 |R_2|^{1/2}) (S_2 |R_2|^{1/2} T_21 |R_1|^{1/2}) = leg1 * leg2,
//    whose entries are computed from logarithms of Mie and translation amplitudes. Powers of k
//    cancel entry by entry, so the xi -> 0 limit exists in this gauge.

#include "casimir/material.hpp"
#include "casimir/mie.hpp"
#include "casimir/translation.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace casimir::roundtrip {

enum class RoundTripMode { FullLogDet, SingleRoundTrip, SingleRoundTripDipole };

std::string to_string(RoundTripMode mode);
RoundTripMode mode_from_string(const std::string& name);

struct GeometryConfig {
  double r1 = 0.05;
  double r2 = 0.05;
  double distance = 1.0; ///< center-to-center

  /// Validates d > R1 + R2 > 0 and returns radii in units of d.
  [[nodiscard]] GeometryConfig normalized() const;
  static GeometryConfig identical(double radius_over_distance) { return {radius_over_distance, radius_over_distance, 1.0}; }
};

struct RoundTripBlock {
  int m = 0;
  double xi = 0.0;
  int lmin = 1;
  int lmax = 1;
  Eigen::MatrixXd leg1;   ///< S_1 |R_1|^{1/2} T_12 |R_2|^{1/2}
  Eigen::MatrixXd leg2;   ///< S_2 |R_2|^{1/2} T_21 |R_1|^{1/2}
  Eigen::MatrixXd matrix; ///< leg1 * leg2
  double norm_inf = 0.0;  ///< max row sum of |matrix|
  double spectral_radius_bound = 0.0; ///< norm_inf, or the spectral radius when the norm is >= 1

  [[nodiscard]] int lcount() const { return lmax - lmin + 1; }
  [[nodiscard]] int size() const { return 2 * lcount(); }
  [[nodiscard]] int index(Polarization p, int l) const {
    return static_cast<int>(p) * lcount() + (l - lmin);
  }
};

/// Mie data of both spheres and the Bessel ladder at one frequency; shared by every m.
struct FrequencyData {
  double xi = 0.0;
  bool is_static = false;
  // per sphere, per polarization (TE = 0, TM = 1), per l - 1: sign and ln|R|
  std::vector<int> sign[2][2];
  std::vector<double> log_abs[2][2];
  std::unique_ptr<translation::KLadder> ladder;
};

/// Assembles blocks for a fixed geometry, material pair and lmax.
class Assembler {
public:
  Assembler(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2, int lmax);

  [[nodiscard]] const GeometryConfig& geometry() const { return geometry_; }
  [[nodiscard]] int lmax() const { return lmax_; }

  [[nodiscard]] FrequencyData frequency(double xi) const;
  [[nodiscard]] FrequencyData static_frequency() const;
  [[nodiscard]] RoundTripBlock block(int m, const FrequencyData& data) const;

private:
  GeometryConfig geometry_;
  Material material_[2];
  int lmax_;
};

RoundTripBlock assemble_block(const GeometryConfig& geometry, const Material& sphere1,
                              const Material& sphere2, int m, double xi, int lmax);

/// Analytic xi -> 0 limit of assemble_block in the balanced gauge.
RoundTripBlock zero_frequency_block(const GeometryConfig& geometry, const Material& sphere1,
                                    const Material& sphere2, int m, int lmax);

struct ChannelTraces {
  double tm = 0.0;    ///< TM on both spheres
  double te = 0.0;    ///< TE on both spheres
  double mix12 = 0.0; ///< TM on sphere 1, TE on sphere 2
  double mix21 = 0.0; ///< TE on sphere 1, TM on sphere 2
  double total = 0.0; ///< Tr M
  /// lpair(i, j): reflection at l = lmin + i on sphere 1 and l = lmin + j on sphere 2.
  Eigen::MatrixXd lpair;

  [[nodiscard]] double mixing() const { return mix12 + mix21; }
};

ChannelTraces channel_traces(const RoundTripBlock& block);

/// ln det(1 - M). Throws ValidityError if the determinant is not positive.
double log_det_one_minus(const RoundTripBlock& block);

} // namespace casimir::roundtrip
