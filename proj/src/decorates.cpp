#include "nanorevival/decorates.hpp"

#include <cmath>
#include <stdexcept>

namespace nanorevival {

using namespace constants;

EnvironmentSpec EnvironmentSpec::from_mbar(double pressure_mbar, double gas_mass_amu,
                                           double gas_temperature_K, double emission_rate) {
  EnvironmentSpec env;
  env.gas_pressure_Pa = pressure_mbar * pascal_per_mbar;
  env.gas_mass_kg = amu_to_kg(gas_mass_amu);
  env.gas_temperature_K = gas_temperature_K;
  env.emission_rate = emission_rate;
  return env;
}

void validate(const EnvironmentSpec& env) {
  if (!(env.gas_pressure_Pa >= 0.0)) throw std::invalid_argument("gas pressure must be non-negative");
  if (!(env.gas_mass_kg >= 0.0)) throw std::invalid_argument("gas mass must be non-negative");
  if (!(env.gas_temperature_K >= 0.0)) throw std::invalid_argument("gas temperature must be non-negative");
  if (!(env.emission_rate >= 0.0)) throw std::invalid_argument("emission rate must be non-negative");
}

double gas_rate(const RotorSpec& spec, const EnvironmentSpec& env) {
  validate(spec);
  validate(env);
  if (env.gas_pressure_Pa == 0.0) return 0.0;
  if (!(env.gas_mass_kg > 0.0) || !(env.gas_temperature_K > 0.0))
    throw std::invalid_argument("gas mass and temperature must be positive at non-zero pressure");
  const double d = spec.effective_diameter_m;
  const double l = spec.length_m;
  return pi * env.gas_pressure_Pa * d * l * (1.0 + d / (2.0 * l)) /
         std::sqrt(2.0 * pi * env.gas_mass_kg * boltzmann * env.gas_temperature_K);
}

double total_rate(const EnvironmentSpec& env, double gas) {
  validate(env);
  return gas + env.emission_rate;
}

double total_rate(const RotorSpec& spec, const EnvironmentSpec& env) {
  return total_rate(env, gas_rate(spec, env));
}

} // namespace nanorevival
