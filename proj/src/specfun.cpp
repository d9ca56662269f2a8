#include "casimir/specfun.hpp"

#include "casimir/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace casimir::specfun {

namespace {

void check_arguments(int lmax, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("modified spherical Bessel: argument must be positive and finite, got " +
                      std::to_string(x));
  if (x > kMaxArgument)
    throw ConfigError("modified spherical Bessel: argument " + std::to_string(x) +
                      " exceeds cap " + std::to_string(kMaxArgument));
  if (lmax < 0 || lmax > kMaxOrder)
    throw ConfigError("modified spherical Bessel: order " + std::to_string(lmax) +
                      " outside [0, " + std::to_string(kMaxOrder) + "]");
}

// i_L / i_{L-1} = 1 / ((2L+1)/x + 1 / ((2L+3)/x + ...)), modified Lentz.
double first_kind_ratio(int L, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-17;
  const long max_iter = 200000 + static_cast<long>(20.0 * x);
  double f = tiny, c = tiny, d = 0.0;
  for (long k = 0; k < max_iter; ++k) {
    const double b = (2.0 * (L + k) + 1.0) / x;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < eps) return f;
  }
  throw ValidityError("continued fraction for i_l ratio did not converge at x = " + std::to_string(x));
}

} // namespace

BesselSequence::BesselSequence(double x, std::vector<double> log_values, std::vector<double> log_derivs,
                               std::vector<double> ratios, bool first_kind)
    : x_(x), log_values_(std::move(log_values)), log_derivs_(std::move(log_derivs)),
      ratios_(std::move(ratios)), first_kind_(first_kind) {}

double BesselSequence::scaled(int l) const {
  return std::exp(first_kind_ ? log_values_[l] - x_ : log_values_[l] + x_);
}

double BesselSequence::dscaled(int l) const { return scaled(l) * log_derivs_[l]; }

BesselSequence bessel_i_scaled(int lmax, double x) {
  check_arguments(lmax, x);
  const int top = lmax + 1;
  std::vector<double> ratio(top + 1, 0.0);
  ratio[top] = first_kind_ratio(top, x);
  for (int l = top - 1; l >= 1; --l)
    ratio[l] = 1.0 / ((2.0 * l + 1.0) / x + ratio[l + 1]);

  std::vector<double> logv(lmax + 1), dlog(lmax + 1);
  // i_0(x) = sinh(x)/x = e^x (1 - e^{-2x}) / (2x)
  logv[0] = x + std::log(-std::expm1(-2.0 * x) / (2.0 * x));
  dlog[0] = ratio[1];
  for (int l = 1; l <= lmax; ++l) {
    logv[l] = logv[l - 1] + std::log(ratio[l]);
    dlog[l] = ratio[l + 1] + l / x;
  }
  return {x, std::move(logv), std::move(dlog), std::move(ratio), true};
}

BesselSequence bessel_k_scaled(int lmax, double x) {
  check_arguments(lmax, x);
  std::vector<double> ratio(lmax + 2, 0.0);
  std::vector<double> logv(lmax + 1), dlog(lmax + 1);
  logv[0] = std::log(std::numbers::pi / 2.0) - x - std::log(x);
  ratio[1] = 1.0 + 1.0 / x;
  for (int l = 1; l <= lmax; ++l)
    ratio[l + 1] = 1.0 / ratio[l] + (2.0 * l + 1.0) / x;
  dlog[0] = -ratio[1];
  for (int l = 1; l <= lmax; ++l) {
    logv[l] = logv[l - 1] + std::log(ratio[l]);
    dlog[l] = -1.0 / ratio[l] - (l + 1.0) / x;
  }
  return {x, std::move(logv), std::move(dlog), std::move(ratio), false};
}

double ScaledBessel::i_scaled() const { return std::exp(log_i - argument); }
double ScaledBessel::k_scaled() const { return std::exp(log_k + argument); }
double ScaledBessel::di_scaled() const { return i_scaled() * dlog_i; }
double ScaledBessel::dk_scaled() const { return k_scaled() * dlog_k; }

ScaledBessel scaled_bessel(int l, double x) {
  const auto i = bessel_i_scaled(l, x);
  const auto k = bessel_k_scaled(l, x);
  return {l, x, i.log_value(l), i.log_deriv(l), k.log_value(l), k.log_deriv(l)};
}

double Riccati::psi() const { return std::exp(log_psi); }
double Riccati::psi_prime() const { return psi() * dlog_psi; }
double Riccati::xi() const { return std::exp(log_xi); }
double Riccati::xi_prime() const { return xi() * dlog_xi; }
double Riccati::psi_scaled() const { return std::exp(log_psi - rho); }
double Riccati::psi_prime_scaled() const { return psi_scaled() * dlog_psi; }
double Riccati::xi_scaled() const { return std::exp(log_xi + rho); }
double Riccati::xi_prime_scaled() const { return xi_scaled() * dlog_xi; }

Riccati riccati(int l, double rho) {
  const auto b = scaled_bessel(l, rho);
  const double lr = std::log(rho);
  return {l, rho, lr + b.log_i, 1.0 / rho + b.dlog_i, lr + b.log_k, 1.0 / rho + b.dlog_k};
}

} // namespace casimir::specfun
