#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"

#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>

using namespace casimir;
using namespace casimir::lifshitz;

namespace {

constexpr double kPi = std::numbers::pi;

PlanePlaneConfig config(double tau, const Material& m = Material::perfect_conductor(), int threads = 1) {
  PlanePlaneConfig c;
  c.material = m;
  c.tau = tau;
  c.threads = threads;
  return c;
}

const Material kDrude = Material::drude_from_groups(400.0, 0.01);

} // namespace

TEST_SUITE("lifshitz") {

TEST_CASE("zero-frequency term of perfect mirrors") {
  // f(0) = 2 int_0^inf (u/4) ln(1 - e^{-u}) du = -zeta(3)/2
  const auto f0 = pp_term(Material::perfect_conductor(), 0.0, 1e-12);
  CHECK(f0.total == doctest::Approx(-boost::math::zeta(3.0) / 2.0).epsilon(1e-12));
  CHECK(f0.te == f0.tm);
  const auto d0 = pp_term(kDrude, 0.0, 1e-12);
  CHECK(d0.te == 0.0);
  CHECK(d0.tm == doctest::Approx(f0.tm).epsilon(1e-12));
}

TEST_CASE("high-temperature entropy per area") {
  const double zeta3 = boost::math::zeta(3.0);
  const auto p = pp_entropy(config(50.0));
  CHECK(p.S.total == doctest::Approx(zeta3 / (8.0 * kPi)).epsilon(1e-6));
  const auto d = pp_entropy(config(50.0, kDrude));
  CHECK(d.S.total / p.S.total == doctest::Approx(0.5).epsilon(1e-4));
  // the TE deficit equals the perfect-mirror TM share
  CHECK(p.S.te - d.S.te == doctest::Approx(p.S.tm).epsilon(1e-4));
}

TEST_CASE("zero-temperature limit is the Casimir energy") {
  const auto r = pp_free_energy(config(0.01));
  CHECK(r.F.total == doctest::Approx(-kPi * kPi / 720.0).epsilon(1e-6));
}

TEST_CASE("polarization split sums to the total") {
  for (double tau : {0.01, 1.0, 20.0}) {
    const auto r = pp_entropy(config(tau, kDrude));
    CHECK(r.S.te + r.S.tm == doctest::Approx(r.S.total).epsilon(1e-12));
    CHECK(r.F.te + r.F.tm == doctest::Approx(r.F.total).epsilon(1e-12));
  }
}

TEST_CASE("perfect-mirror entropy is positive and increasing") {
  double prev = 0.0;
  for (double tau : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const auto r = pp_entropy(config(tau));
    CHECK(r.S.total > prev);
    prev = r.S.total;
  }
}

TEST_CASE("Drude entropy is negative at intermediate temperature") {
  const auto r = pp_entropy(config(0.5, kDrude));
  CHECK(r.S.total < 0.0);
}

TEST_CASE("tighter quadrature tolerance changes the free energy below 1e-9") {
  auto c = config(1.0, kDrude);
  const auto a = pp_free_energy(c);
  c.quad_tolerance = 1e-13;
  const auto b = pp_free_energy(c);
  CHECK(std::fabs(a.F.total - b.F.total) < 1e-9 * std::fabs(b.F.total));
}

TEST_CASE("deterministic across thread counts") {
  const auto a = pp_entropy(config(0.3, kDrude, 1));
  const auto b = pp_entropy(config(0.3, kDrude, 3));
  CHECK(a.S.total == b.S.total);
  CHECK(a.F.total == b.F.total);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(pp_entropy(config(-1.0)), DomainError);
  CHECK_THROWS_AS(pp_term(Material::perfect_conductor(), -1.0, 1e-10), DomainError);
}

}
