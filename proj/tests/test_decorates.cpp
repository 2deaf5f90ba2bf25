#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nanorevival/decorates.hpp"

using namespace nanorevival;
using doctest::Approx;

namespace {
// Wall flux p / sqrt(2 pi m kB T) times the closed-cylinder surface.
double kinetic_rate(double p, double d, double l, double m, double T) {
  const double kB = 1.380649e-23;
  const double n = p / (kB * T);
  const double vbar = std::sqrt(8.0 * kB * T / (std::numbers::pi * m));
  const double area = std::numbers::pi * d * l + 2.0 * std::numbers::pi * d * d / 4.0;
  return 0.25 * n * vbar * area;
}
} // namespace

TEST_CASE("CNT in nitrogen at 5e-9 mbar") {
  const auto cnt = find_preset("CNT")->rotor;
  const auto env = EnvironmentSpec::from_mbar(5e-9);
  CHECK(env.gas_pressure_Pa == Approx(5e-7));
  const double g = gas_rate(cnt, env);
  CHECK(g == Approx(kinetic_rate(5e-7, 3e-9, 50e-9, 28.0 * 1.66053906660e-27, 300.0)).epsilon(1e-12));
  CHECK(1.0 / total_rate(cnt, env) == Approx(0.1433334).epsilon(1e-6));
}

TEST_CASE("rate scalings") {
  const auto cnt = find_preset("CNT")->rotor;
  const auto base = EnvironmentSpec::from_mbar(1e-8);
  const double g = gas_rate(cnt, base);
  CHECK(gas_rate(cnt, EnvironmentSpec::from_mbar(3e-8)) == Approx(3.0 * g).epsilon(1e-14));
  CHECK(gas_rate(cnt, EnvironmentSpec::from_mbar(1e-8, 4.0 * 28.0)) == Approx(0.5 * g).epsilon(1e-14));
  CHECK(gas_rate(cnt, EnvironmentSpec::from_mbar(1e-8, 28.0, 1200.0)) == Approx(0.5 * g).epsilon(1e-14));
  CHECK(gas_rate(cnt, EnvironmentSpec::from_mbar(0.0)) == 0.0);
  auto env = base;
  env.emission_rate = 2.5;
  CHECK(total_rate(cnt, env) == Approx(g + 2.5).epsilon(1e-15));
  CHECK(total_rate(env, 1.0) == 3.5);
}

TEST_CASE("environment validation") {
  const auto cnt = find_preset("CNT")->rotor;
  CHECK_THROWS_AS(gas_rate(cnt, EnvironmentSpec::from_mbar(-1.0)), std::invalid_argument);
  auto env = EnvironmentSpec::from_mbar(1e-9);
  env.emission_rate = -1.0;
  CHECK_THROWS_AS(validate(env), std::invalid_argument);
  CHECK_THROWS_AS(gas_rate(cnt, EnvironmentSpec::from_mbar(1e-9, 0.0)), std::invalid_argument);
}
