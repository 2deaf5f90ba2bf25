#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nanorevival/macroscopicity.hpp"
#include "nanorevival/physcore.hpp"
#include "oracles.hpp"

using namespace nanorevival;
using doctest::Approx;

namespace {
const ThetaMax& peak() {
  static const ThetaMax p = theta_max();
  return p;
}

MacroInputs rod(double mass_amu, double length_m, int n) {
  const auto spec = RotorSpec::from_amu(mass_amu, length_m);
  MacroInputs in;
  in.mass_kg = spec.mass_kg;
  in.length_m = length_m;
  in.revival_index = n;
  in.visibility_ratio = 0.8;
  in.revival_time_s = revival_time(spec);
  return in;
}
} // namespace

TEST_CASE("theta against the Bessel-mean oracle") {
  for (double x : {0.3, 2.0, 8.0, 20.0, 60.0}) {
    INFO("x = " << x);
    CHECK(theta(x) == Approx(oracle::theta_bessel(x)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("theta limits") {
  CHECK(theta(0.0) == 0.0);
  // small x: Var[sinc(c cos a)] ~ c^4 / 1440 with <u^5> = 8 under u e^{-u^2/2}
  const double x = 1e-2;
  CHECK(theta(x) == Approx(8.0 * std::pow(x / 2.0, 4) / 1440.0).epsilon(1e-3));
  const double far = theta(1e3);
  CHECK(far < peak().theta_m);
  CHECK(far > 0.0);
  CHECK_THROWS(theta(-1.0));
}

TEST_CASE("theta is stable under doubled quadrature") {
  ThetaQuadrature fine;
  fine.radial_nodes = 128;
  fine.min_angle_nodes = 128;
  fine.angle_nodes_per_x = 16.0;
  fine.panel_nodes = 32;
  for (double x : {0.5, 8.0, 40.0}) CHECK(theta(x) == Approx(theta(x, fine)).epsilon(1e-8));
}

TEST_CASE("theta maximum") {
  CHECK(peak().theta_m == Approx(0.1199663545).epsilon(1e-8));
  CHECK(peak().x_star == Approx(8.0756).epsilon(1e-3));
  CHECK(theta(peak().x_star * 1.05) < peak().theta_m);
  CHECK(theta(peak().x_star / 1.05) < peak().theta_m);
}

TEST_CASE("macroscopicity bounds") {
  CHECK(mu_bound(rod(1e6, 50e-9, 10)) == Approx(17.5661).epsilon(1e-5));
  const auto tmv = find_preset("TMV")->rotor;
  auto in = rod(4e7, 300e-9, 1);
  in.mass_kg = tmv.mass_kg;
  in.revival_time_s = revival_time(tmv);
  CHECK(mu_bound(in) == Approx(22.9286).epsilon(1e-5));
  // one decade per factor of ten in n
  CHECK(mu_bound(rod(1e6, 50e-9, 100)) - mu_bound(rod(1e6, 50e-9, 10)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bound equals the solved modification time") {
  for (int n : {1, 10, 37}) {
    const auto in = rod(1e6, 50e-9, n);
    const double tau = solve_modification_time(in, peak().theta_m);
    CHECK(std::log10(tau) == Approx(mu_bound(in, peak().theta_m)).epsilon(1e-6));
    auto at = in;
    at.tau_modification = tau;
    CHECK(planar_alignment_decay(at, peak().theta_m) == Approx(0.9).epsilon(1e-10));
  }
}

TEST_CASE("planar decay limits") {
  auto in = rod(1e6, 50e-9, 10);
  in.tau_modification = std::numeric_limits<double>::infinity();
  CHECK(planar_alignment_decay(in, 0.1) == 1.0);
  in.tau_modification = 1.0;
  CHECK(planar_alignment_decay(in, 0.0) == 1.0);
  in.tau_modification = 1e-300;
  CHECK(planar_alignment_decay(in, 0.1) == 0.5);
  in.tau_modification = 1.0;
  in.sigma_q = 0.0;
  CHECK(planar_alignment_decay(in) == 1.0);
  in.sigma_q = 8.0 * constants::hbar / in.length_m;
  CHECK(planar_alignment_decay(in) == Approx(planar_alignment_decay(in, theta(8.0))).epsilon(1e-15));
  in.visibility_ratio = 1.0;
  CHECK_THROWS_AS(mu_bound(in, 0.12), std::invalid_argument);
  in.visibility_ratio = 0.8;
  in.revival_index = 0;
  CHECK_THROWS_AS(mu_bound(in, 0.12), std::invalid_argument);
}
