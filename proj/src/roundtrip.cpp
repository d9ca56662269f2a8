#include "casimir/roundtrip.hpp"

#include "casimir/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace casimir::roundtrip {

namespace {

constexpr int kTE = static_cast<int>(Polarization::TE);
constexpr int kTM = static_cast<int>(Polarization::TM);

void fill_reflection(FrequencyData& data, int sphere, const std::vector<mie::MiePair>& pairs) {
  for (int p = 0; p < 2; ++p) {
    data.sign[sphere][p].resize(pairs.size());
    data.log_abs[sphere][p].resize(pairs.size());
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    data.sign[sphere][kTM][i] = pairs[i].a.sign();
    data.log_abs[sphere][kTM][i] = pairs[i].a.log_abs();
    data.sign[sphere][kTE][i] = pairs[i].b.sign();
    data.log_abs[sphere][kTE][i] = pairs[i].b.log_abs();
  }
}

void check_validity(RoundTripBlock& b) {
  b.norm_inf = b.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  b.spectral_radius_bound = b.norm_inf;
  if (b.norm_inf < 1.0) return;
  Eigen::EigenSolver<Eigen::MatrixXd> es(b.matrix, false);
  b.spectral_radius_bound = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(b.spectral_radius_bound < 1.0)) {
    std::ostringstream os;
    os << "round-trip operator has spectral radius " << b.spectral_radius_bound << " >= 1 (m = " << b.m
       << ", xi = " << b.xi << ")";
    throw ValidityError(os.str());
  }
}

} // namespace

std::string to_string(RoundTripMode mode) {
  switch (mode) {
  case RoundTripMode::FullLogDet: return "full";
  case RoundTripMode::SingleRoundTrip: return "srt";
  case RoundTripMode::SingleRoundTripDipole: return "dipole";
  }
  return "?";
}

RoundTripMode mode_from_string(const std::string& name) {
  if (name == "full") return RoundTripMode::FullLogDet;
  if (name == "srt") return RoundTripMode::SingleRoundTrip;
  if (name == "dipole") return RoundTripMode::SingleRoundTripDipole;
  throw ConfigError("unknown round-trip mode '" + name + "' (expected full, srt or dipole)");
}

GeometryConfig GeometryConfig::normalized() const {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !(distance > 0.0))
    throw DomainError("sphere radii and distance must be positive");
  if (!(distance > r1 + r2)) throw DomainError("spheres overlap: need d > R1 + R2");
  return {r1 / distance, r2 / distance, 1.0};
}

Assembler::Assembler(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                     int lmax)
    : geometry_(geometry.normalized()), material_{sphere1, sphere2}, lmax_(lmax) {
  if (lmax < 1) throw DomainError("lmax must be at least 1");
}

FrequencyData Assembler::frequency(double xi) const {
  if (!(xi > 0.0)) throw DomainError("assemble_block needs xi > 0; use zero_frequency_block for xi = 0");
  FrequencyData d;
  d.xi = xi;
  const double radius[2] = {geometry_.r1, geometry_.r2};
  for (int s = 0; s < 2; ++s)
    fill_reflection(d, s, mie::mie_sequence(material_[s], lmax_, xi * radius[s], xi));
  d.ladder = std::make_unique<translation::KLadder>(2 * lmax_, xi);
  return d;
}

FrequencyData Assembler::static_frequency() const {
  FrequencyData d;
  d.is_static = true;
  const double radius[2] = {geometry_.r1, geometry_.r2};
  for (int s = 0; s < 2; ++s) {
    for (int p = 0; p < 2; ++p) {
      d.sign[s][p].resize(lmax_);
      d.log_abs[s][p].resize(lmax_);
    }
    for (int l = 1; l <= lmax_; ++l) {
      const auto lim = mie::static_limit(material_[s], l);
      const double lr = (2.0 * l + 1.0) * std::log(radius[s]);
      d.sign[s][kTM][l - 1] = lim.tm.sign();
      d.log_abs[s][kTM][l - 1] = lim.tm.log_abs() + lr;
      d.sign[s][kTE][l - 1] = lim.te.sign();
      d.log_abs[s][kTE][l - 1] = lim.te.log_abs() + lr;
    }
  }
  return d;
}

RoundTripBlock Assembler::block(int m, const FrequencyData& data) const {
  m = std::abs(m);
  const int lmin = std::max(1, m);
  if (lmax_ < lmin) throw DomainError("lmax must be at least max(1, m)");
  const auto table = translation::translation_table(m, lmax_);

  RoundTripBlock b;
  b.m = m;
  b.xi = data.xi;
  b.lmin = lmin;
  b.lmax = lmax_;
  const int n = b.lcount();

  // translation amplitudes, symmetric in (l1, l2)
  Eigen::MatrixXd cons_log(n, n), mix_log(n, n);
  Eigen::MatrixXi cons_sign(n, n), mix_sign(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int l1 = lmin + i, l2 = lmin + j;
      ScaledReal c, x;
      if (data.is_static) {
        c = table->conserved_static(l1, l2);
      } else {
        c = table->conserved(l1, l2, *data.ladder);
        x = table->mixing(l1, l2, *data.ladder);
      }
      cons_log(i, j) = cons_log(j, i) = c.log_abs();
      cons_sign(i, j) = cons_sign(j, i) = c.sign();
      mix_log(i, j) = mix_log(j, i) = x.log_abs();
      mix_sign(i, j) = mix_sign(j, i) = x.sign();
    }
  }

  // leg1: sphere-1 reflection, translation 2 -> 1 along -z (mixing amplitude negated)
  // leg2: sphere-2 reflection, translation 1 -> 2 along +z, folded sign (-1)^{l'-l''}
  b.leg1.setZero(b.size(), b.size());
  b.leg2.setZero(b.size(), b.size());
  auto entry = [&](int sign_r, double half_left, double half_right, int sign_t, double log_t) {
    if (sign_r == 0 || sign_t == 0) return 0.0;
    return static_cast<double>(sign_r * sign_t) * std::exp(half_left + log_t + half_right);
  };
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const bool conserved = (p == q);
      for (int i = 0; i < n; ++i) {
        const int li = lmin + i;
        for (int j = 0; j < n; ++j) {
          const int lj = lmin + j;
          const int ts = conserved ? cons_sign(i, j) : mix_sign(i, j);
          const double tl = conserved ? cons_log(i, j) : mix_log(i, j);
          const int row = p * n + i, col = q * n + j;
          b.leg1(row, col) = entry(data.sign[0][p][li - 1], 0.5 * data.log_abs[0][p][li - 1],
                                   0.5 * data.log_abs[1][q][lj - 1], conserved ? ts : -ts, tl);
          const int fold = ((li - lj) % 2 == 0) ? 1 : -1;
          b.leg2(row, col) = entry(data.sign[1][p][li - 1], 0.5 * data.log_abs[1][p][li - 1],
                                   0.5 * data.log_abs[0][q][lj - 1], fold * ts, tl);
        }
      }
    }
  }
  b.matrix.noalias() = b.leg1 * b.leg2;
  check_validity(b);
  return b;
}

RoundTripBlock assemble_block(const GeometryConfig& geometry, const Material& sphere1,
                              const Material& sphere2, int m, double xi, int lmax) {
  const Assembler a(geometry, sphere1, sphere2, lmax);
  return a.block(m, a.frequency(xi));
}

RoundTripBlock zero_frequency_block(const GeometryConfig& geometry, const Material& sphere1,
                                    const Material& sphere2, int m, int lmax) {
  const Assembler a(geometry, sphere1, sphere2, lmax);
  return a.block(m, a.static_frequency());
}

ChannelTraces channel_traces(const RoundTripBlock& block) {
  const int n = block.lcount();
  ChannelTraces t;
  t.lpair.setZero(n, n);
  double pol[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double v = block.leg1(p * n + i, q * n + j) * block.leg2(q * n + j, p * n + i);
          pol[p][q] += v;
          t.lpair(i, j) += v;
        }
      }
    }
  }
  t.tm = pol[kTM][kTM];
  t.te = pol[kTE][kTE];
  t.mix12 = pol[kTM][kTE];
  t.mix21 = pol[kTE][kTM];
  t.total = block.matrix.trace();
  return t;
}

double log_det_one_minus(const RoundTripBlock& block) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(block.size(), block.size()) - block.matrix;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const auto& u = lu.matrixLU();
  double log_det = 0.0;
  double sign = lu.permutationP().determinant();
  for (int i = 0; i < a.rows(); ++i) {
    const double d = u(i, i);
    if (d < 0.0) sign = -sign;
    log_det += std::log(std::fabs(d));
  }
  if (!(sign > 0.0) || !std::isfinite(log_det))
    throw ValidityError("det(1 - M) is not positive (m = " + std::to_string(block.m) + ")");
  return log_det;
}

} // namespace casimir::roundtrip
