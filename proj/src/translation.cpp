#include "casimir/translation.hpp"

#include "casimir/errors.hpp"
#include "casimir/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace casimir::translation {

namespace {

constexpr double kPi = std::numbers::pi;

double lfact(int n) { return std::lgamma(n + 1.0); }

void check_orders(int l1, int l2, int m) {
  if (l1 < 0 || l2 < 0) throw DomainError("multipole orders must be non-negative");
  if (std::abs(m) > std::min(l1, l2))
    throw DomainError("|m| = " + std::to_string(std::abs(m)) + " exceeds min(l1, l2) = " +
                      std::to_string(std::min(l1, l2)));
}

} // namespace

std::vector<double> wigner3j_sequence(int l1, int l2, int m) {
  check_orders(l1, l2, m);
  const int jmin = std::abs(l1 - l2);
  const int jmax = l1 + l2;
  std::vector<double> f(jmax - jmin + 1, 0.0);

  // stretched case J = l1 + l2, m3 = 0
  const double log_top = 0.5 * (lfact(2 * l1) + lfact(2 * l2) + 2.0 * lfact(jmax) - lfact(2 * jmax + 1) -
                                lfact(l1 - m) - lfact(l1 + m) - lfact(l2 + m) - lfact(l2 - m));
  f.back() = ((l1 - l2) % 2 == 0 ? 1.0 : -1.0) * std::exp(log_top);

  const double d2 = static_cast<double>(l1 - l2) * (l1 - l2);
  const double s2 = static_cast<double>(jmax + 1) * (jmax + 1);
  auto E = [&](double j) { return j * std::sqrt((j * j - d2) * (s2 - j * j)); };

  // J E(J+1) f(J+1) + F(J) f(J) + (J+1) E(J) f(J-1) = 0, F(J) = 2m (2J+1) J (J+1)
  double next = 0.0; // f(J+1)
  for (int J = jmax; J > jmin; --J) {
    const double cur = f[J - jmin];
    const double Fj = 2.0 * m * (2.0 * J + 1.0) * J * (J + 1.0);
    const double Ej1 = (J == jmax) ? 0.0 : E(J + 1.0);
    f[J - 1 - jmin] = -(J * Ej1 * next + Fj * cur) / ((J + 1.0) * E(J));
    next = cur;
  }
  return f;
}

GauntTable gaunt_table(int l1, int l2, int m) {
  check_orders(l1, l2, m);
  const auto w0 = wigner3j_sequence(l1, l2, 0);
  const auto wm = wigner3j_sequence(l1, l2, m);
  GauntTable t{l1, l2, m, std::abs(l1 - l2), l1 + l2, std::vector<double>(w0.size(), 0.0)};
  const double base = (2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) / (4.0 * kPi);
  for (int lp = t.lp_min; lp <= t.lp_max; ++lp) {
    if ((l1 + l2 + lp) % 2 != 0) continue; // (l1 l2 l'; 0 0 0) vanishes
    const int i = lp - t.lp_min;
    t.values[i] = std::sqrt(base * (2.0 * lp + 1.0)) * w0[i] * wm[i];
  }
  return t;
}

KLadder::KLadder(int jmax, double kd) : kd_(kd) {
  if (!(kd > 0.0)) throw DomainError("translation needs kd > 0");
  const auto k = specfun::bessel_k_scaled(jmax, kd);
  log_k_.resize(jmax + 1);
  down2_.assign(jmax + 1, 0.0);
  for (int j = 0; j <= jmax; ++j) log_k_[j] = k.log_value(j);
  for (int j = 2; j <= jmax; ++j) down2_[j] = 1.0 / (k.ratio(j) * k.ratio(j - 1));
}

TranslationTable::TranslationTable(int m, int lmax)
    : m_(std::abs(m)), lmin_(std::max(1, std::abs(m))), lmax_(lmax) {
  if (lmax_ < lmin_) throw DomainError("lmax must be at least max(1, |m|)");
  const int n = lmax_ - lmin_ + 1;
  spans_.reserve(static_cast<std::size_t>(n) * n);
  const double sign_m = (m_ % 2 == 0) ? -1.0 : 1.0; // (-1)^{m+1}
  for (int l1 = lmin_; l1 <= lmax_; ++l1) {
    for (int l2 = lmin_; l2 <= lmax_; ++l2) {
      const auto y = gaunt_table(l1, l2, m_);
      const double pref = sign_m / std::sqrt(kPi * l1 * (l1 + 1.0) * l2 * (l2 + 1.0));
      const double q12 = l1 * (l1 + 1.0) + l2 * (l2 + 1.0);
      Span s{static_cast<int>(conserved_.size()), 0};
      for (int lp = y.lp_min; lp <= y.lp_max; lp += 2) {
        const double root = std::sqrt(2.0 * lp + 1.0);
        conserved_.push_back(pref * 2.0 * root * (q12 - lp * (lp + 1.0)) * y(lp));
        mixing_.push_back(pref * 4.0 * root * m_ * y(lp));
        ++s.count;
      }
      spans_.push_back(s);
    }
  }
}

// sum_j coeff_j k_{l'_j}(kd) as k_{l1+l2}(kd) * (nested sum in ascending magnitude)
ScaledReal TranslationTable::nested_sum(const double* coeff, const Span& s, int l1, int l2,
                                        const KLadder& ladder) {
  const int top = l1 + l2;
  const int low = top - 2 * (s.count - 1);
  double acc = coeff[s.offset];
  for (int i = 1; i < s.count; ++i) acc = coeff[s.offset + i] + acc * ladder.down2(low + 2 * i);
  if (acc == 0.0) return {};
  return {acc, ladder.log_k(top)};
}

ScaledReal TranslationTable::conserved(int l1, int l2, const KLadder& ladder) const {
  return nested_sum(conserved_.data(), span(l1, l2), l1, l2, ladder);
}

ScaledReal TranslationTable::mixing(int l1, int l2, const KLadder& ladder) const {
  if (m_ == 0) return {};
  auto v = nested_sum(mixing_.data(), span(l1, l2), l1, l2, ladder);
  v.log_scale += std::log(ladder.kd());
  return v;
}

ScaledReal TranslationTable::conserved_static(int l1, int l2) const {
  const auto& s = span(l1, l2);
  const int top = l1 + l2;
  // k_L(x) ~ (pi/2) (2L-1)!! / x^{L+1}
  double log_df = 0.0;
  for (int j = 1; j <= 2 * top - 1; j += 2) log_df += std::log(static_cast<double>(j));
  return {conserved_[s.offset + s.count - 1], std::log(kPi / 2.0) + log_df};
}

std::shared_ptr<const TranslationTable> translation_table(int m, int lmax) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const TranslationTable>> cache;
  const auto key = std::make_pair(std::abs(m), lmax);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const TranslationTable>(m, lmax);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

std::complex<double> TransElement::phase() const {
  const int p = ((l1 - l2) % 4 + 4) % 4;
  const std::complex<double> unit = direction == Direction::PlusZ ? std::complex<double>(0, 1)
                                                                  : std::complex<double>(0, -1);
  std::complex<double> r = 1.0;
  for (int i = 0; i < p; ++i) r *= unit;
  return r;
}

TransElement translation_element(int l1, int l2, int m, Polarization pol_in, Polarization pol_out,
                                 double kd, Direction direction) {
  if (!(kd > 0.0)) throw DomainError("translation needs kd > 0");
  const int lmin = std::max(1, std::abs(m));
  if (l1 < lmin || l2 < lmin) throw DomainError("translation orders must satisfy l >= max(1, |m|)");
  const auto table = translation_table(m, std::max(l1, l2));
  const KLadder ladder(l1 + l2, kd);
  TransElement e{l1, l2, m, pol_in, pol_out, kd, direction, {}};
  if (pol_in == pol_out) {
    e.value = table->conserved(l1, l2, ladder);
  } else {
    e.value = table->mixing(l1, l2, ladder);
    if (direction == Direction::MinusZ) e.value.mantissa = -e.value.mantissa;
    if (m < 0) e.value.mantissa = -e.value.mantissa;
  }
  return e;
}

DipoleProducts dipole_products(double kd) {
  if (!(kd > 0.0)) throw DomainError("translation needs kd > 0");
  const double x = kd;
  const double e = std::exp(-2.0 * x);
  const double p0 = 1.0 / (x * x) + 1.0 / (x * x * x);
  const double p1 = 1.0 / x + 1.0 / (x * x) + 1.0 / (x * x * x);
  const double pm = 1.0 / x + 1.0 / (x * x);
  return {9.0 * e * p0 * p0, 9.0 / 4.0 * e * p1 * p1, -9.0 / 4.0 * e * pm * pm};
}

} // namespace casimir::translation
