#pragma once

// Spherical-wave translation along the z axis at imaginary wave number.
//
// For fixed m the element between multipoles l1 and l2 is
//   T^{PP'}_{l1,l2;m}(kd) = (-1)^{m+1} (+-i)^{l1-l2} / sqrt(pi l1(l1+1) l2(l2+1))
//                         * sum_{l'} c^{PP'}_{l1,l2,l';m} Y^{l1,l2,l'}_{-m,m,0} k_{l'}(kd)
// with c^{PP}  = 2 sqrt(2l'+1) [l1(l1+1) + l2(l2+1) - l'(l'+1)]
//      c^{PP'} = +-4 sqrt(2l'+1) m kd          (P != P')
// and the upper sign for translations along +z. The phase (+-i)^{l1-l2} is kept apart from the
// real amplitude; see roundtrip.hpp for how it is folded out of the round-trip product.

#include "casimir/scaled.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace casimir {

enum class Polarization { TE = 0, TM = 1 };

} // namespace casimir

namespace casimir::translation {

enum class Direction { PlusZ, MinusZ };

/// Wigner 3j symbols (l1 l2 J; -m m 0) for J = |l1-l2| .. l1+l2, by three-term recurrence in J
/// started at J = l1+l2 from the closed stretched-case formula.
std::vector<double> wigner3j_sequence(int l1, int l2, int m);

/// Gaunt coefficients Y^{l1,l2,l'}_{-m,m,0} for l' = |l1-l2| .. l1+l2.
struct GauntTable {
  int l1 = 0, l2 = 0, m = 0;
  int lp_min = 0, lp_max = 0;
  std::vector<double> values;

  [[nodiscard]] double operator()(int lp) const {
    return (lp < lp_min || lp > lp_max) ? 0.0 : values[lp - lp_min];
  }
};

GauntTable gaunt_table(int l1, int l2, int m);

/// ln k_j(kd) for j = 0..jmax and the step ratios k_{j-2}/k_j used for nested summation.
class KLadder {
public:
  KLadder(int jmax, double kd);

  [[nodiscard]] double kd() const { return kd_; }
  [[nodiscard]] int jmax() const { return static_cast<int>(log_k_.size()) - 1; }
  [[nodiscard]] double log_k(int j) const { return log_k_[j]; }
  [[nodiscard]] double down2(int j) const { return down2_[j]; }

private:
  double kd_;
  std::vector<double> log_k_;
  std::vector<double> down2_;
};

/// Sum coefficients for one m and all pairs l1, l2 in [max(1,m), lmax]. Independent of kd, so
/// one table serves every Matsubara frequency.
class TranslationTable {
public:
  TranslationTable(int m, int lmax);

  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int lmin() const { return lmin_; }
  [[nodiscard]] int lmax() const { return lmax_; }

  /// Real amplitude of the polarization-conserving element (phase excluded).
  [[nodiscard]] ScaledReal conserved(int l1, int l2, const KLadder& ladder) const;
  /// Real amplitude of the polarization-mixing element for +z (negated for -z).
  [[nodiscard]] ScaledReal mixing(int l1, int l2, const KLadder& ladder) const;
  /// C with conserved(l1, l2) ~ C / (kd)^{l1+l2+1} as kd -> 0.
  [[nodiscard]] ScaledReal conserved_static(int l1, int l2) const;

private:
  struct Span {
    int offset;
    int count; // l' = lp_low, lp_low + 2, ..., l1 + l2
  };
  [[nodiscard]] const Span& span(int l1, int l2) const {
    return spans_[(l1 - lmin_) * (lmax_ - lmin_ + 1) + (l2 - lmin_)];
  }
  [[nodiscard]] static ScaledReal nested_sum(const double* coeff, const Span& s, int l1, int l2,
                                             const KLadder& ladder);

  int m_, lmin_, lmax_;
  std::vector<Span> spans_;
  std::vector<double> conserved_;
  std::vector<double> mixing_;
};

/// Shared, lazily built table for (|m|, lmax). Thread-safe.
std::shared_ptr<const TranslationTable> translation_table(int m, int lmax);

struct TransElement {
  int l1 = 1, l2 = 1, m = 0;
  Polarization pol_in = Polarization::TM, pol_out = Polarization::TM;
  double kd = 0.0;
  Direction direction = Direction::PlusZ;
  ScaledReal value; ///< real amplitude; the element is phase() * value

  [[nodiscard]] std::complex<double> phase() const;
  [[nodiscard]] std::complex<double> complex_value() const { return phase() * value.value(); }
};

TransElement translation_element(int l1, int l2, int m, Polarization pol_in, Polarization pol_out,
                                 double kd, Direction direction);

/// Round-trip translation products in the dipole limit l1 = l2 = 1:
///   T^{PP}_{11;0} T^{PP}_{11;0}   = 9 e^{-2kd} (1/(kd)^2 + 1/(kd)^3)^2
///   T^{PP}_{11;1} T^{PP}_{11;1}   = 9/4 e^{-2kd} (1/kd + 1/(kd)^2 + 1/(kd)^3)^2
///   T^{PP'}_{11;1} T^{P'P}_{11;1} = -9/4 e^{-2kd} (1/kd + 1/(kd)^2)^2
struct DipoleProducts {
  double conserved_m0 = 0.0;
  double conserved_m1 = 0.0;
  double mixing_m1 = 0.0;
};

DipoleProducts dipole_products(double kd);

} // namespace casimir::translation
