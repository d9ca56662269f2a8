#include "casimir/errors.hpp"
#include "casimir/thermo.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace casimir;
using namespace casimir::thermo;

namespace {

constexpr double kPi = std::numbers::pi;
const Material kPec = Material::perfect_conductor();

ThermalConfig config(double tau, RoundTripMode mode, int threads = 1) {
  ThermalConfig c;
  c.tau = tau;
  c.mode = mode;
  c.threads = threads;
  return c;
}

} // namespace

TEST_SUITE("thermo") {

TEST_CASE("high-temperature entropy of static dipoles") {
  // S_HT = -f(0)/2 with f(0) = -(6 + 3/2)(R/d)^6; TM carries 6 of 7.5
  const double r = 0.05, r6 = std::pow(r, 6);
  const auto g = GeometryConfig::identical(r);
  const auto p = ht_asymptotics(g, kPec, kPec, config(1.0, RoundTripMode::SingleRoundTripDipole));
  CHECK(p.S_HT == doctest::Approx(3.75 * r6).epsilon(1e-13));
  CHECK(p.tm_share() == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(p.te_share() == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(p.mix_share() == 0.0);
  const auto d = ht_asymptotics(g, Material::drude_from_groups(400.0, 0.01), Material::drude_from_groups(400.0, 0.01),
                                config(1.0, RoundTripMode::SingleRoundTripDipole));
  CHECK(d.S_HT == doctest::Approx(3.0 * r6).epsilon(1e-13));
  CHECK(d.S_HT_P == doctest::Approx(3.75 * r6).epsilon(1e-13));
  CHECK(d.delta_S_HT_TE == doctest::Approx(0.75 * r6).epsilon(1e-13));
}

TEST_CASE("zero-temperature dipole energy equals the Feinberg-Sucher result") {
  // E = (1/2pi) int_0^inf f(xi) dxi = -143/(16 pi) R^6/d^7 for perfectly conducting dipoles
  const double r = 0.05;
  const auto g = GeometryConfig::identical(r);
  const auto c = config(1.0, RoundTripMode::SingleRoundTripDipole);
  const roundtrip::Assembler a(g, kPec, kPec, 1);
  boost::math::quadrature::exp_sinh<double> quad;
  // the integrand decays as e^{-2 xi}
  auto f = [&](double xi) { return xi > 300.0 ? 0.0 : matsubara_term(a, c, xi, -1).total; };
  const double integral = quad.integrate(f, 1e-12);
  const double want = -143.0 / (16.0 * kPi) * std::pow(r, 6);
  CHECK(integral / (2.0 * kPi) == doctest::Approx(want).epsilon(1e-9));
  const auto low = free_energy(g, kPec, kPec, config(1e-3, RoundTripMode::SingleRoundTripDipole));
  CHECK(low.F.total == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("entropy is minus the temperature derivative of the free energy") {
  const auto g = GeometryConfig::identical(0.2);
  const auto mat = Material::drude_from_groups(50.0, 0.5);
  for (auto mode : {RoundTripMode::SingleRoundTrip, RoundTripMode::FullLogDet}) {
    const double tau = 2.0, h = 0.02;
    const auto s = entropy(g, mat, mat, config(tau, mode));
    auto F = [&](double t) { return free_energy(g, mat, mat, config(t, mode)).F.total; };
    const double d = (-F(tau + 2 * h) + 8 * F(tau + h) - 8 * F(tau - h) + F(tau - 2 * h)) / (12 * h);
    CHECK(s.S.total == doctest::Approx(-2.0 * kPi * d).epsilon(1e-6));
    CHECK_FALSE(s.warning);
    CHECK(s.err_est < 1e-6 * std::fabs(s.S.total));
  }
}

TEST_CASE("free-energy difference equals the integrated entropy") {
  // F(b) - F(a) = -(1/2pi) int_a^b S dtau, Simpson with 16 panels
  const auto g = GeometryConfig::identical(0.05);
  const auto c = [](double t) { return config(t, RoundTripMode::SingleRoundTripDipole); };
  const double a = 1.0, b = 5.0;
  const int n = 16;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = a + (b - a) * i / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * entropy(g, kPec, kPec, c(t)).S.total;
  }
  const double integral = sum * (b - a) / (3.0 * n);
  const double dF = free_energy(g, kPec, kPec, c(b)).F.total - free_energy(g, kPec, kPec, c(a)).F.total;
  CHECK(dF == doctest::Approx(-integral / (2.0 * kPi)).epsilon(1e-5));
}

TEST_CASE("reported tail bound covers the truncated Matsubara tail") {
  const auto g = GeometryConfig::identical(0.2);
  for (double tau : {0.05, 0.5, 3.0}) {
    auto c = config(tau, RoundTripMode::SingleRoundTrip);
    const auto coarse = free_energy(g, kPec, kPec, c);
    c.matsubara_tolerance = 1e-15;
    const auto fine = free_energy(g, kPec, kPec, c);
    const double tail = std::fabs(fine.F.total - coarse.F.total);
    CHECK(tail <= coarse.truncation.tail_bound + 1e-15 * std::fabs(fine.F.total));
    CHECK(coarse.truncation.tail_bound <= 1e-6 * std::fabs(fine.F.total));
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto g = GeometryConfig::identical(0.25);
  const auto mat = Material::drude_from_groups(20.0, 1.0);
  const auto a = entropy(g, mat, mat, config(0.7, RoundTripMode::FullLogDet, 1));
  const auto b = entropy(g, mat, mat, config(0.7, RoundTripMode::FullLogDet, 4));
  CHECK(a.S.total == b.S.total);
  CHECK(a.F.total == b.F.total);
  CHECK(a.S.mix12 == b.S.mix12);
  CHECK(a.truncation.n_max == b.truncation.n_max);
}

TEST_CASE("channels partition the single-round-trip value") {
  const auto g = GeometryConfig::identical(0.2);
  auto c = config(1.5, RoundTripMode::FullLogDet);
  c.lpair = true;
  const auto r = entropy(g, kPec, kPec, c);
  CHECK(r.S.channel_sum() == doctest::Approx(r.S.srt).epsilon(1e-10));
  CHECK(r.F.channel_sum() == doctest::Approx(r.F.srt).epsilon(1e-12));
  CHECK(r.S.mix12 == doctest::Approx(r.S.mix21).epsilon(1e-10));
  double pairs = 0.0;
  for (int l1 = 1; l1 <= r.truncation.lmax; ++l1)
    for (int l2 = l1; l2 <= r.truncation.lmax; ++l2) pairs += r.F.lpair_symmetric(l1, l2);
  CHECK(pairs == doctest::Approx(r.F.srt).epsilon(1e-12));
  // log det differs from the single round trip by the higher round trips, which are attractive
  CHECK(r.F.total < r.F.srt);
  const auto scaled = r.scaled_F();
  CHECK(scaled.total == doctest::Approx(r.F.total * std::pow(0.2, -6)).epsilon(1e-14));
}

TEST_CASE("doubling lmax leaves a converged result unchanged") {
  const auto g = GeometryConfig::identical(0.2);
  auto c = config(1.0, RoundTripMode::FullLogDet);
  c.lmax = 12;
  const auto a = entropy(g, kPec, kPec, c);
  c.lmax = 24;
  const auto b = entropy(g, kPec, kPec, c);
  CHECK(a.S.total == doctest::Approx(b.S.total).epsilon(1e-6));
  CHECK(a.F.total == doctest::Approx(b.F.total).epsilon(1e-8));
  CHECK(effective_lmax(g, config(1.0, RoundTripMode::SingleRoundTripDipole)) == 1);
  CHECK(effective_lmax(g, config(1.0, RoundTripMode::FullLogDet)) >= 12);
}

TEST_CASE("high-temperature limit of the full entropy") {
  const auto g = GeometryConfig::identical(0.05);
  const auto c = config(60.0, RoundTripMode::SingleRoundTripDipole);
  const auto mat = Material::drude_from_groups(400.0, 0.01);
  const auto p = entropy(g, kPec, kPec, c);
  const auto d = entropy(g, mat, mat, c);
  const auto ht = ht_asymptotics(g, kPec, kPec, c);
  CHECK(p.S.total / ht.S_HT == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.S.total / p.S.total == doctest::Approx(0.8).epsilon(1e-4));
}

TEST_CASE("distance scan rescales units") {
  const auto mat = Material::drude(2.0 * kPi * 20.0, 2.0 * kPi * 20.0 * 1e-3); // units c/R
  const auto pts = entropy_distance_scan({8.0}, mat, 0.5, {RoundTripMode::SingleRoundTrip, RoundTripMode::FullLogDet},
                                         config(1.0, RoundTripMode::SingleRoundTrip));
  REQUIRE(pts.size() == 2);
  const auto direct = entropy(GeometryConfig::identical(1.0 / 8.0), mat.rescaled(8.0), mat.rescaled(8.0),
                              config(4.0, RoundTripMode::SingleRoundTrip));
  CHECK(pts[0].report.S.total == doctest::Approx(direct.S.total).epsilon(1e-12));
  CHECK(pts[0].report.F.total == doctest::Approx(direct.F.total / 8.0).epsilon(1e-12));
  CHECK(pts[1].rel_diff_to_full == 0.0);
  CHECK(std::fabs(pts[0].rel_diff_to_full) < 0.05);
  CHECK_THROWS_AS(entropy_distance_scan({2.0}, mat, 0.5, {RoundTripMode::SingleRoundTrip}, {}), DomainError);
}

TEST_CASE("invalid configurations") {
  const auto g = GeometryConfig::identical(0.1);
  CHECK_THROWS_AS(entropy(g, kPec, kPec, config(0.0, RoundTripMode::SingleRoundTrip)), DomainError);
  auto c = config(1.0, RoundTripMode::SingleRoundTrip);
  c.matsubara_tolerance = 0.0;
  CHECK_THROWS_AS(free_energy(g, kPec, kPec, c), ConfigError);
  c = config(1e-3, RoundTripMode::SingleRoundTrip);
  c.max_matsubara = 10;
  CHECK_THROWS_AS(free_energy(g, kPec, kPec, c), ConfigError);
}

}
