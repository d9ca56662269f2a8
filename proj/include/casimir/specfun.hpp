#pragma once

// Modified spherical Bessel functions of real positive argument.
//
// Conventions: i_l(x) = sqrt(pi/2x) I_{l+1/2}(x), k_l(x) = sqrt(pi/2x) K_{l+1/2}(x), so that
// k_0(x) = (pi/2) e^{-x} / x. Both functions are positive for x > 0 and are carried as
// natural logarithms together with their logarithmic derivatives; the exponentially scaled
// values i_l e^{-x} and k_l e^{x} are derived accessors. Nothing unscaled is stored, which
// keeps orders up to the cap representable for arguments between 1e-3 and 1e6.

#include <vector>

namespace casimir::specfun {

inline constexpr int kMaxOrder = 512;
inline constexpr double kMaxArgument = 1e6;

/// Values of one Bessel family for orders 0..lmax at a fixed argument.
class BesselSequence {
public:
  BesselSequence(double x, std::vector<double> log_values, std::vector<double> log_derivs,
                 std::vector<double> ratios, bool first_kind);

  [[nodiscard]] double argument() const { return x_; }
  [[nodiscard]] int max_order() const { return static_cast<int>(log_values_.size()) - 1; }

  /// ln f_l(x)
  [[nodiscard]] double log_value(int l) const { return log_values_[l]; }
  /// f_l'(x) / f_l(x)
  [[nodiscard]] double log_deriv(int l) const { return log_derivs_[l]; }
  /// f_l(x) / f_{l-1}(x) for l >= 1; one extra entry (l = lmax + 1) is kept for i_l.
  [[nodiscard]] double ratio(int l) const { return ratios_[l]; }

  /// i_l(x) e^{-x} for the first kind, k_l(x) e^{x} for the second kind.
  [[nodiscard]] double scaled(int l) const;
  /// Derivative with the same exponential factor: i_l'(x) e^{-x} or k_l'(x) e^{x}.
  [[nodiscard]] double dscaled(int l) const;

private:
  double x_;
  std::vector<double> log_values_;
  std::vector<double> log_derivs_;
  std::vector<double> ratios_;
  bool first_kind_;
};

/// i_l(x) for l = 0..lmax (Miller-style downward recurrence started from a continued fraction).
BesselSequence bessel_i_scaled(int lmax, double x);

/// k_l(x) for l = 0..lmax (upward recurrence).
BesselSequence bessel_k_scaled(int lmax, double x);

/// Both functions at a single order.
struct ScaledBessel {
  int order = 0;
  double argument = 0.0;
  double log_i = 0.0, dlog_i = 0.0;
  double log_k = 0.0, dlog_k = 0.0;

  [[nodiscard]] double i_scaled() const;
  [[nodiscard]] double k_scaled() const;
  [[nodiscard]] double di_scaled() const;
  [[nodiscard]] double dk_scaled() const;
};

ScaledBessel scaled_bessel(int l, double x);

/// Riccati-Bessel functions psi_l(rho) = rho i_l(rho), xi_l(rho) = rho k_l(rho).
struct Riccati {
  int order = 0;
  double rho = 0.0;
  double log_psi = 0.0;  ///< ln psi
  double dlog_psi = 0.0; ///< psi' / psi
  double log_xi = 0.0;   ///< ln xi
  double dlog_xi = 0.0;  ///< xi' / xi

  [[nodiscard]] double psi() const;
  [[nodiscard]] double psi_prime() const;
  [[nodiscard]] double xi() const;
  [[nodiscard]] double xi_prime() const;
  /// psi e^{-rho}, psi' e^{-rho}, xi e^{rho}, xi' e^{rho}
  [[nodiscard]] double psi_scaled() const;
  [[nodiscard]] double psi_prime_scaled() const;
  [[nodiscard]] double xi_scaled() const;
  [[nodiscard]] double xi_prime_scaled() const;
};

Riccati riccati(int l, double rho);

} // namespace casimir::specfun
