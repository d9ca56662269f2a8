#pragma once

#include <cmath>

namespace casimir {

/// Real number stored as mantissa * exp(log_scale).
///
/// Used wherever a quantity can leave the double range on its own (Mie coefficients at
/// large order, translation elements at small kd) while the products that are finally
/// materialized stay representable.
struct ScaledReal {
  double mantissa = 0.0;
  double log_scale = 0.0;

  [[nodiscard]] double value() const { return mantissa == 0.0 ? 0.0 : mantissa * std::exp(log_scale); }
  [[nodiscard]] int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }
  /// ln|x|; -inf for zero.
  [[nodiscard]] double log_abs() const {
    return mantissa == 0.0 ? -INFINITY : std::log(std::fabs(mantissa)) + log_scale;
  }

  static ScaledReal from_log(int sign, double log_abs) {
    if (sign == 0 || (std::isinf(log_abs) && log_abs < 0)) return {};
    return {static_cast<double>(sign), log_abs};
  }
};

inline ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
  return {a.mantissa * b.mantissa, a.log_scale + b.log_scale};
}

} // namespace casimir
