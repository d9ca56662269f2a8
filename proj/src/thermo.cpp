#include "casimir/thermo.hpp"

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace casimir::thermo {

namespace {

constexpr double kPi = std::numbers::pi;

struct SumResult {
  ChannelValues sum; ///< f(0) + 2 sum_{n>=1} f(xi_n)
  MatsubaraPlan plan;
  double tail = 0.0; ///< estimated |remaining sum|
};

void check_config(const ThermalConfig& c) {
  if (!(c.tau > 0.0)) throw DomainError("temperature tau must be positive");
  if (!(c.matsubara_tolerance > 0.0) || !(c.m_tolerance > 0.0))
    throw ConfigError("truncation tolerances must be positive");
  if (!(c.fd_step > 0.0)) throw ConfigError("finite-difference step must be positive");
  if (c.lmax < 0) throw ConfigError("lmax must be non-negative");
}

double tail_estimate(double last, double previous) {
  const double a = std::fabs(last), b = std::fabs(previous);
  if (a == 0.0) return 0.0;
  const double q = b > 0.0 ? a / b : 1.0;
  return q < 1.0 ? 2.0 * a * q / (1.0 - q) : 10.0 * a;
}

ChannelValues term_at(const roundtrip::Assembler& a, const ThermalConfig& c, long n, double xi, int m_limit,
                      int* m_used) {
  try {
    return matsubara_term(a, c, xi, m_limit, m_used);
  } catch (const ValidityError& e) {
    throw ValidityError(std::string(e.what()) + " at Matsubara index n = " + std::to_string(n));
  }
}

SumResult adaptive_sum(const roundtrip::Assembler& a, const ThermalConfig& c, const ChannelValues& f0, int m0) {
  SumResult r;
  r.sum = f0;
  r.plan.m_max.push_back(m0);
  const long batch = std::max<long>(8, 4L * std::max(1, c.threads));
  long n = 1;
  int quiet = 0;
  double previous = f0.total;
  for (;;) {
    if (n > c.max_matsubara)
      throw ConfigError("Matsubara sum did not converge within " + std::to_string(c.max_matsubara) + " terms");
    std::vector<ChannelValues> terms(batch);
    std::vector<int> used(batch, 0);
    parallel_for(static_cast<std::size_t>(batch), c.threads, [&](std::size_t i) {
      const long k = n + static_cast<long>(i);
      terms[i] = term_at(a, c, k, static_cast<double>(k) * c.tau, -1, &used[i]);
    });
    for (long i = 0; i < batch; ++i) {
      const long k = n + i;
      r.sum.add(terms[i], 2.0);
      r.plan.m_max.push_back(used[i]);
      quiet = (static_cast<double>(k) * std::fabs(2.0 * terms[i].total) < c.matsubara_tolerance * std::fabs(r.sum.total))
                  ? quiet + 1
                  : 0;
      if (quiet >= 5) {
        r.plan.n_max = k;
        r.tail = tail_estimate(terms[i].total, previous);
        return r;
      }
      previous = terms[i].total;
    }
    n += batch;
  }
}

ChannelValues planned_sum(const roundtrip::Assembler& a, const ThermalConfig& c, double tau,
                          const ChannelValues& f0, const MatsubaraPlan& plan) {
  const long count = plan.n_max;
  std::vector<ChannelValues> terms(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), c.threads, [&](std::size_t i) {
    const long k = static_cast<long>(i) + 1;
    terms[i] = term_at(a, c, k, static_cast<double>(k) * tau, plan.m_max[k], nullptr);
  });
  ChannelValues sum = f0;
  for (const auto& t : terms) sum.add(t, 2.0);
  return sum;
}

double scale6(const GeometryConfig& g) {
  const auto n = g.normalized();
  return 1.0 / (std::pow(n.r1, 3) * std::pow(n.r2, 3));
}

Truncation truncation_of(int lmax, const SumResult& s, double tau) {
  Truncation t;
  t.lmax = lmax;
  t.n_max = s.plan.n_max;
  t.m_max = s.plan.m_max.empty() ? 0 : *std::max_element(s.plan.m_max.begin(), s.plan.m_max.end());
  t.tail_bound = tau / (4.0 * kPi) * s.tail;
  return t;
}

} // namespace

int effective_lmax(const GeometryConfig& geometry, const ThermalConfig& config) {
  if (config.mode == RoundTripMode::SingleRoundTripDipole) return 1;
  if (config.lmax > 0) return config.lmax;
  const auto g = geometry.normalized();
  const double r = std::max(g.r1, g.r2);
  const double q = r / (1.0 - r);
  const int l = static_cast<int>(std::ceil(std::log(1e-12) / (2.0 * std::log(q)))) + 2;
  return std::clamp(l, 3, 60);
}

double ChannelValues::lpair_symmetric(int l1, int l2) const {
  if (lpair.size() == 0) return 0.0;
  if (l1 < 1 || l2 < 1 || l1 > lpair.rows() || l2 > lpair.rows()) return 0.0;
  if (l1 == l2) return lpair(l1 - 1, l1 - 1);
  return lpair(l1 - 1, l2 - 1) + lpair(l2 - 1, l1 - 1);
}

ChannelValues& ChannelValues::add(const ChannelValues& other, double weight) {
  total += weight * other.total;
  srt += weight * other.srt;
  tm += weight * other.tm;
  te += weight * other.te;
  mix12 += weight * other.mix12;
  mix21 += weight * other.mix21;
  if (other.lpair.size() != 0) {
    if (lpair.size() == 0) lpair = Eigen::MatrixXd::Zero(other.lpair.rows(), other.lpair.cols());
    lpair += weight * other.lpair;
  }
  return *this;
}

ChannelValues& ChannelValues::scale(double factor) {
  total *= factor;
  srt *= factor;
  tm *= factor;
  te *= factor;
  mix12 *= factor;
  mix21 *= factor;
  lpair *= factor;
  return *this;
}

ChannelValues ChannelReport::scaled_F() const {
  ChannelValues v = F;
  return v.scale(scale6);
}

ChannelValues ChannelReport::scaled_S() const {
  ChannelValues v = S;
  return v.scale(scale6);
}

ChannelValues matsubara_term(const roundtrip::Assembler& assembler, const ThermalConfig& config, double xi,
                             int m_limit, int* m_used) {
  const auto data = xi == 0.0 ? assembler.static_frequency() : assembler.frequency(xi);
  const int lmax = assembler.lmax();
  const bool full = config.mode == RoundTripMode::FullLogDet;
  const int mtop = m_limit < 0 ? lmax : std::min(m_limit, lmax);
  ChannelValues acc;
  if (config.lpair) acc.lpair = Eigen::MatrixXd::Zero(lmax, lmax);
  int last = 0;
  for (int m = 0; m <= mtop; ++m) {
    const auto block = assembler.block(m, data);
    const auto tr = roundtrip::channel_traces(block);
    ChannelValues v;
    v.srt = -tr.total;
    v.tm = -tr.tm;
    v.te = -tr.te;
    v.mix12 = -tr.mix12;
    v.mix21 = -tr.mix21;
    v.total = full ? roundtrip::log_det_one_minus(block) : v.srt;
    if (config.lpair) {
      v.lpair = Eigen::MatrixXd::Zero(lmax, lmax);
      v.lpair.block(block.lmin - 1, block.lmin - 1, block.lcount(), block.lcount()) = -tr.lpair;
    }
    const double g = m == 0 ? 1.0 : 2.0;
    acc.add(v, g);
    last = m;
    if (m_limit < 0 && m > 0 && std::fabs(g * v.total) <= config.m_tolerance * std::fabs(acc.total)) break;
  }
  if (m_used) *m_used = last;
  return acc;
}

MatsubaraPlan plan_matsubara(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                             const ThermalConfig& config) {
  check_config(config);
  const roundtrip::Assembler a(geometry, sphere1, sphere2, effective_lmax(geometry, config));
  int m0 = 0;
  const auto f0 = term_at(a, config, 0, 0.0, -1, &m0);
  return adaptive_sum(a, config, f0, m0).plan;
}

ChannelReport free_energy(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                          const ThermalConfig& config) {
  check_config(config);
  const int lmax = effective_lmax(geometry, config);
  const roundtrip::Assembler a(geometry, sphere1, sphere2, lmax);
  int m0 = 0;
  const auto f0 = term_at(a, config, 0, 0.0, -1, &m0);
  auto s = adaptive_sum(a, config, f0, m0);
  ChannelReport r;
  r.tau = config.tau;
  r.F = s.sum;
  r.F.scale(config.tau / (4.0 * kPi));
  r.truncation = truncation_of(lmax, s, config.tau);
  r.scale6 = scale6(geometry);
  return r;
}

ChannelReport entropy(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                      const ThermalConfig& config) {
  check_config(config);
  const int lmax = effective_lmax(geometry, config);
  const roundtrip::Assembler a(geometry, sphere1, sphere2, lmax);
  int m0 = 0;
  const auto f0 = term_at(a, config, 0, 0.0, -1, &m0);
  const auto center = adaptive_sum(a, config, f0, m0);
  const double tau = config.tau;

  double h = config.fd_step * tau;
  while (tau - h <= 0.0) h *= 0.5;

  auto F_at = [&](double t) {
    auto v = planned_sum(a, config, t, f0, center.plan);
    return v.scale(t / (4.0 * kPi));
  };
  auto derivative = [&](double step) {
    ChannelValues d = F_at(tau + step);
    d.add(F_at(tau - step), -1.0);
    return d.scale(1.0 / (2.0 * step));
  };
  const ChannelValues d1 = derivative(h);
  const ChannelValues d2 = derivative(0.5 * h);
  ChannelValues dr = d2;
  dr.scale(4.0).add(d1, -1.0).scale(1.0 / 3.0);

  ChannelReport r;
  r.tau = tau;
  r.F = center.sum;
  r.F.scale(tau / (4.0 * kPi));
  r.S = dr;
  r.S.scale(-2.0 * kPi);
  r.has_entropy = true;
  r.err_est = 2.0 * kPi * std::fabs(dr.total - d2.total);
  const double scale = std::max(std::fabs(r.S.total), 1e-3 * 2.0 * kPi * std::fabs(r.F.total) / tau);
  r.warning = !(r.err_est <= 1e-3 * scale);
  r.truncation = truncation_of(lmax, center, tau);
  r.scale6 = scale6(geometry);
  return r;
}

HighTemperature ht_asymptotics(const GeometryConfig& geometry, const Material& sphere1, const Material& sphere2,
                               const ThermalConfig& config) {
  const int lmax = effective_lmax(geometry, config);
  auto static_term = [&](const Material& m1, const Material& m2) {
    const roundtrip::Assembler a(geometry, m1, m2, lmax);
    return term_at(a, config, 0, 0.0, -1, nullptr);
  };
  const auto f0 = static_term(sphere1, sphere2);
  HighTemperature h;
  h.S_HT = -0.5 * f0.total;
  h.S_TM = -0.5 * f0.tm;
  h.S_TE = -0.5 * f0.te;
  h.S_mix = -0.5 * f0.mixing();
  const bool pec = sphere1.is_perfect_conductor() && sphere2.is_perfect_conductor();
  const auto fp = pec ? f0 : static_term(Material::perfect_conductor(), Material::perfect_conductor());
  h.S_HT_P = -0.5 * fp.total;
  h.delta_S_HT_TE = -0.5 * fp.te - h.S_TE;
  return h;
}

std::vector<DistancePoint> entropy_distance_scan(const std::vector<double>& d_over_R, const Material& material_R,
                                                 double tau_R, const std::vector<RoundTripMode>& modes,
                                                 const ThermalConfig& base) {
  if (!(tau_R > 0.0)) throw DomainError("tau_R must be positive");
  if (modes.empty()) throw ConfigError("distance scan needs at least one mode");
  std::vector<DistancePoint> out;
  for (double dR : d_over_R) {
    if (!(dR > 2.0)) throw DomainError("d/R must exceed 2 (non-overlapping spheres)");
    const auto geometry = GeometryConfig::identical(1.0 / dR);
    const Material material = material_R.rescaled(dR);
    const std::size_t first = out.size();
    const DistancePoint* full = nullptr;
    for (auto mode : modes) {
      ThermalConfig c = base;
      c.mode = mode;
      c.tau = tau_R * dR;
      DistancePoint p;
      p.d_over_R = dR;
      p.mode = mode;
      p.report = entropy(geometry, material, material, c);
      p.report.F.scale(1.0 / dR);
      out.push_back(std::move(p));
    }
    for (std::size_t i = first; i < out.size(); ++i)
      if (out[i].mode == RoundTripMode::FullLogDet) full = &out[i];
    if (full) {
      const double s_ex = full->report.S.total;
      for (std::size_t i = first; i < out.size(); ++i)
        out[i].rel_diff_to_full = (out[i].report.S.total - s_ex) / std::fabs(s_ex);
    }
  }
  return out;
}

} // namespace casimir::thermo
