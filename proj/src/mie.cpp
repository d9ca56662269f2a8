#include "casimir/mie.hpp"

#include "casimir/errors.hpp"
#include "casimir/specfun.hpp"

#include <cmath>
#include <numbers>

namespace casimir::mie {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double parity_sign(int l) { return (l % 2 == 1) ? 1.0 : -1.0; } // (-1)^{l+1}

void check(int lmax, double kR, double k) {
  if (lmax < 1) throw DomainError("Mie coefficients start at l = 1");
  if (!(kR > 0.0) || !(k > 0.0)) throw DomainError("Mie coefficients need kR > 0 and k > 0");
}

} // namespace

std::vector<MiePair> mie_sequence(const Material& material, int lmax, double kR, double k) {
  check(lmax, kR, k);
  const double x = kR;
  const auto in = specfun::bessel_i_scaled(lmax, x);
  const auto kn = specfun::bessel_k_scaled(lmax, x);

  std::vector<MiePair> out;
  out.reserve(lmax);

  if (material.is_perfect_conductor()) {
    for (int l = 1; l <= lmax; ++l) {
      const double log_ratio = in.log_value(l) - kn.log_value(l);
      const double f = l + 1.0 + x * in.ratio(l + 1);
      const double h = -l - x / kn.ratio(l);
      const double s = parity_sign(l) * kHalfPi;
      out.push_back({l, kR, {s * f / h, log_ratio}, {s, log_ratio}});
    }
    return out;
  }

  const double chi = material.susceptibility(k);
  const double eps = 1.0 + chi;
  const double nx = std::sqrt(eps) * x;
  const auto inner = specfun::bessel_i_scaled(lmax, nx);

  for (int l = 1; l <= lmax; ++l) {
    const double log_ratio = in.log_value(l) - kn.log_value(l);
    const double gx = x * in.ratio(l + 1);
    const double gnx = nx * inner.ratio(l + 1);
    const double fnx = l + 1.0 + gnx;
    const double h = -l - x / kn.ratio(l);
    const double s = parity_sign(l) * kHalfPi;

    const double tm = (chi * (l + 1.0) + eps * gx - gnx) / (eps * h - fnx);
    const double te = (gx - gnx) / (h - fnx);
    out.push_back({l, kR, {s * tm, log_ratio}, {s * te, log_ratio}});
  }
  return out;
}

MiePair mie_coefficients(const Material& material, int l, double kR, double k) {
  return mie_sequence(material, l, kR, k).back();
}

StaticLimit static_limit(const Material& material, int l) {
  if (l < 1) throw DomainError("Mie coefficients start at l = 1");
  // 1 / ((2l+1)!! (2l-1)!!)
  double log_norm = 0.0;
  for (int j = 1; j <= 2 * l + 1; j += 2) log_norm -= std::log(static_cast<double>(j));
  for (int j = 1; j <= 2 * l - 1; j += 2) log_norm -= std::log(static_cast<double>(j));
  const double s = parity_sign(l);
  StaticLimit lim;
  lim.tm = {-s * (l + 1.0) / l, log_norm};
  lim.te = material.is_perfect_conductor() ? ScaledReal{s, log_norm} : ScaledReal{};
  return lim;
}

MiePair mie_expansion(const Material& material, int l, double kR, double radius) {
  if (l != 1) throw ConfigError("analytic Mie expansion is only available for l = 1");
  if (!(kR > 0.0) || !(kR < 0.1)) throw DomainError("analytic Mie expansion requires 0 < kR < 0.1");
  const double x = kR;
  const double x3 = x * x * x, x4 = x3 * x, x5 = x4 * x;
  double a = 0.0, b = 0.0;
  if (material.is_perfect_conductor()) {
    a = -2.0 / 3.0 * x3 + 1.0 / 5.0 * x5;
    b = 1.0 / 3.0 * x3 + 1.0 / 5.0 * x5;
  } else {
    const double s = material.dc_conductivity() * radius; // sigma0 R / c
    const double sg = material.dc_conductivity() / material.damping();
    a = -2.0 / 3.0 * x3 + 2.0 / s * x4;
    b = s / 45.0 * x4 - (2.0 / 21.0 * s * s + sg) / 45.0 * x5;
  }
  return {1, kR, {a, 0.0}, {b, 0.0}};
}

std::string to_string(Regime regime) {
  switch (regime) {
  case Regime::Rayleigh: return "rayleigh";
  case Regime::Dipole: return "dipole";
  case Regime::Multipole: return "multipole";
  }
  return "?";
}

DipoleRatios dipole_ratios(const Material& material, double radius, double kR,
                           const RegimeThresholds& thresholds) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  const auto seq = mie_sequence(material, 2, kR, kR / radius);
  const auto& a1 = seq[0].a;
  const auto& b1 = seq[0].b;
  const auto& a2 = seq[1].a;
  DipoleRatios r;
  r.minus_b1_over_a1 = -(b1.mantissa / a1.mantissa) * std::exp(b1.log_scale - a1.log_scale);
  r.a2_over_a1 = (a2.mantissa / a1.mantissa) * std::exp(a2.log_scale - a1.log_scale);
  if (std::fabs(r.a2_over_a1) > thresholds.multipole)
    r.regime = Regime::Multipole;
  else if (std::fabs(r.minus_b1_over_a1) < thresholds.rayleigh)
    r.regime = Regime::Rayleigh;
  else
    r.regime = Regime::Dipole;
  return r;
}

Regime regime_classify(const Material& material, double radius, double kR,
                       const RegimeThresholds& thresholds) {
  return dipole_ratios(material, radius, kR, thresholds).regime;
}

RayleighValidity rayleigh_validity(const Material& material, double radius, double distance,
                                   double margin) {
  if (!(radius > 0.0) || !(distance > 0.0)) throw DomainError("radius and distance must be positive");
  RayleighValidity v;
  v.te_parameter = radius * material.dc_conductivity() / 30.0;
  v.distance_ratio = distance / radius;
  v.ratio = v.te_parameter / v.distance_ratio;
  v.valid = v.ratio < margin;
  v.radius_over_skin_depth = std::sqrt(v.ratio);
  return v;
}

} // namespace casimir::mie
