#include "casimir/lifshitz.hpp"

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace casimir::lifshitz {

namespace {

constexpr double kPi = std::numbers::pi;

struct Reflection {
  double te2;
  double tm2;
};

Reflection reflection(const Material& m, double xi, double kappa) {
  if (m.is_perfect_conductor()) return {1.0, 1.0};
  if (xi == 0.0) return {0.0, 1.0};
  const double wp = m.plasma_frequency();
  const double chi_xi2 = wp * wp * xi / (xi + m.damping()); // (eps - 1) xi^2
  const double eps = m.permittivity(xi);
  const double km = std::sqrt(kappa * kappa + chi_xi2);
  const double s = kappa + km;
  const double te = -chi_xi2 / (s * s);
  const double tm = (eps * kappa - km) / (eps * kappa + km);
  return {te * te, tm * tm};
}

// int_0^inf (u/4) ln(1 - r^2 e^{-u}) dt with u = 2 xi + t
double integrate(const Material& m, double xi, bool te, double tol, double* err) {
  const double damp = std::exp(-2.0 * xi);
  auto g = [&](double t) {
    const double u = 2.0 * xi + t;
    const auto r = reflection(m, xi, 0.5 * u);
    const double q = (te ? r.te2 : r.tm2) * damp;
    if (q == 0.0) return 0.0;
    if (q < 0.5) return 0.25 * u * std::log1p(-q * std::exp(-t));
    // 1 - q e^{-t} = (1 - q) - q expm1(-t), exact near t = 0 when q = 1
    return 0.25 * u * std::log((1.0 - q) - q * std::expm1(-t));
  };
  double e = 0.0;
  double l1 = 0.0;
  thread_local boost::math::quadrature::exp_sinh<double> quad;
  const double v = quad.integrate(g, tol, &e, &l1);
  if (err) *err = e;
  return v;
}

void check(const PlanePlaneConfig& c) {
  if (!(c.tau > 0.0)) throw DomainError("temperature tau must be positive");
  if (!(c.quad_tolerance > 0.0) || !(c.matsubara_tolerance > 0.0))
    throw ConfigError("tolerances must be positive");
  if (!(c.fd_step > 0.0)) throw ConfigError("finite-difference step must be positive");
}

struct Sum {
  PolarizationSplit value; ///< f(0) + 2 sum f(xi_n)
  long n_max = 0;
  double quad_error = 0.0;
};

PolarizationSplit checked_term(const PlanePlaneConfig& c, double xi, double* err) {
  double e = 0.0;
  auto t = pp_term(c.material, xi, c.quad_tolerance, &e);
  const double scale = std::fabs(t.te) + std::fabs(t.tm);
  if (e > 1e-6 * scale && e > 1e-300) {
    std::ostringstream os;
    os << "transverse-momentum quadrature did not converge at xi = " << xi << ": estimate " << scale
       << ", error " << e;
    throw ValidityError(os.str());
  }
  if (err) *err = e / std::max(scale, 1e-300);
  return t;
}

Sum adaptive(const PlanePlaneConfig& c, const PolarizationSplit& f0) {
  Sum s;
  s.value = f0;
  const long batch = std::max<long>(8, 4L * std::max(1, c.threads));
  long n = 1;
  int quiet = 0;
  for (;;) {
    if (n > c.max_matsubara) throw ConfigError("Matsubara sum did not converge");
    std::vector<PolarizationSplit> terms(batch);
    std::vector<double> errs(batch, 0.0);
    parallel_for(static_cast<std::size_t>(batch), c.threads, [&](std::size_t i) {
      terms[i] = checked_term(c, static_cast<double>(n + static_cast<long>(i)) * c.tau, &errs[i]);
    });
    for (long i = 0; i < batch; ++i) {
      s.value.add(terms[i], 2.0);
      s.quad_error = std::max(s.quad_error, errs[i]);
      const double weight = static_cast<double>(n + i);
      quiet = (weight * std::fabs(2.0 * terms[i].total) < c.matsubara_tolerance * std::fabs(s.value.total)) ? quiet + 1 : 0;
      if (quiet >= 5) {
        s.n_max = n + i;
        return s;
      }
    }
    n += batch;
  }
}

PolarizationSplit planned(const PlanePlaneConfig& c, double tau, const PolarizationSplit& f0, long n_max) {
  std::vector<PolarizationSplit> terms(static_cast<std::size_t>(n_max));
  parallel_for(terms.size(), c.threads, [&](std::size_t i) {
    terms[i] = checked_term(c, static_cast<double>(i + 1) * tau, nullptr);
  });
  PolarizationSplit v = f0;
  for (const auto& t : terms) v.add(t, 2.0);
  return v;
}

double area_factor(double tau) { return tau / (8.0 * kPi * kPi); } // (T/2)(1/2pi)

} // namespace

PolarizationSplit& PolarizationSplit::add(const PolarizationSplit& other, double weight) {
  total += weight * other.total;
  te += weight * other.te;
  tm += weight * other.tm;
  return *this;
}

PolarizationSplit& PolarizationSplit::scale(double factor) {
  total *= factor;
  te *= factor;
  tm *= factor;
  return *this;
}

PolarizationSplit pp_term(const Material& material, double xi, double tolerance, double* error) {
  if (xi < 0.0) throw DomainError("Matsubara frequency must be non-negative");
  double e_te = 0.0, e_tm = 0.0;
  PolarizationSplit t;
  t.tm = integrate(material, xi, false, tolerance, &e_tm);
  if (material.is_perfect_conductor()) {
    t.te = t.tm;
    e_te = e_tm;
  } else {
    t.te = integrate(material, xi, true, tolerance, &e_te);
  }
  t.total = t.te + t.tm;
  if (error) *error = e_te + e_tm;
  return t;
}

PlanePlaneResult pp_free_energy(const PlanePlaneConfig& config) {
  check(config);
  double e0 = 0.0;
  const auto f0 = checked_term(config, 0.0, &e0);
  auto s = adaptive(config, f0);
  PlanePlaneResult r;
  r.tau = config.tau;
  r.F = s.value;
  r.F.scale(area_factor(config.tau));
  r.n_max = s.n_max;
  r.quad_error = std::max(s.quad_error, e0);
  return r;
}

PlanePlaneResult pp_entropy(const PlanePlaneConfig& config) {
  check(config);
  double e0 = 0.0;
  const auto f0 = checked_term(config, 0.0, &e0);
  const auto center = adaptive(config, f0);
  const double tau = config.tau;
  double h = config.fd_step * tau;
  while (tau - h <= 0.0) h *= 0.5;

  auto F_at = [&](double t) { return planned(config, t, f0, center.n_max).scale(area_factor(t)); };
  auto derivative = [&](double step) {
    PolarizationSplit d = F_at(tau + step);
    d.add(F_at(tau - step), -1.0);
    return d.scale(1.0 / (2.0 * step));
  };
  const auto d1 = derivative(h);
  const auto d2 = derivative(0.5 * h);
  PolarizationSplit dr = d2;
  dr.scale(4.0).add(d1, -1.0).scale(1.0 / 3.0);

  PlanePlaneResult r;
  r.tau = tau;
  r.F = center.value;
  r.F.scale(area_factor(tau));
  r.S = dr;
  r.S.scale(-2.0 * kPi);
  r.S.total = r.S.te + r.S.tm;
  r.has_entropy = true;
  r.err_est = 2.0 * kPi * std::fabs(dr.total - d2.total);
  const double scale = std::max(std::fabs(r.S.total), 1e-3 * 2.0 * kPi * std::fabs(r.F.total) / tau);
  r.warning = !(r.err_est <= 1e-3 * scale);
  r.n_max = center.n_max;
  r.quad_error = std::max(center.quad_error, e0);
  return r;
}

} // namespace casimir::lifshitz
