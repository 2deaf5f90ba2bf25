#pragma once

#include "nanorevival/physcore.hpp"

namespace nanorevival {

struct EnvironmentSpec {
  double gas_pressure_Pa = 0.0;
  double gas_mass_kg = 28.0 * constants::atomic_mass_unit;  // N2
  double gas_temperature_K = 300.0;
  double emission_rate = 0.0;  // 1/s, supplied by the user

  static EnvironmentSpec from_mbar(double pressure_mbar, double gas_mass_amu = 28.0,
                                   double gas_temperature_K = 300.0, double emission_rate = 0.0);
};

void validate(const EnvironmentSpec& env);

/// Collision rate pi p d l (1 + d / 2l) / sqrt(2 pi m_g kB T_g).
double gas_rate(const RotorSpec& spec, const EnvironmentSpec& env);
double total_rate(const EnvironmentSpec& env, double gas_rate);
double total_rate(const RotorSpec& spec, const EnvironmentSpec& env);

} // namespace nanorevival
