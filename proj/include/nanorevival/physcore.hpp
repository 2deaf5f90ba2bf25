#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nanorevival {

/// CODATA 2018 values (SI). Entries marked exact are fixed by the 2019 SI redefinition.
namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double planck = 6.62607015e-34;              // J s, exact
inline constexpr double hbar = 1.054571817646156e-34;         // J s, h / 2pi
inline constexpr double boltzmann = 1.380649e-23;             // J / K, exact
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double speed_of_light = 299792458.0;         // m / s, exact
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F / m
inline constexpr double standard_gravity = 9.81;              // m / s^2
inline constexpr double pascal_per_mbar = 100.0;
inline constexpr const char* constant_set = "CODATA2018";
} // namespace constants

double amu_to_kg(double amu);
double kg_to_amu(double kg);

/// Thin-rod model of a levitated linear rotor.
struct RotorSpec {
  double mass_kg = 0.0;
  double length_m = 0.0;
  double effective_diameter_m = 0.0;               // gas-scattering diameter
  std::optional<double> polarizability_anisotropy; // C m^2 / V

  static RotorSpec from_amu(double mass_amu, double length_m, double effective_diameter_m = 0.0);
};

struct TrapSpec {
  double power_W = 0.0;
  double waist_m = 1.0;
  std::optional<double> depth_override_J;
};

/// Throws std::invalid_argument when an invariant is violated.
void validate(const RotorSpec& spec);
void validate(const TrapSpec& trap);

double moment_of_inertia(const RotorSpec& spec);

/// B = hbar^2 / 2I, the energy unit of the dimensionless kernel.
double rotational_energy_unit(const RotorSpec& spec);

double revival_time(const RotorSpec& spec);

/// Optical potential depth V0 = 4 da P / (pi c eps0 w^2), or the override.
double trap_depth(const RotorSpec& spec, const TrapSpec& trap);

/// Semiclassical thermal mean of the total angular momentum quantum number.
double mean_j(const RotorSpec& spec, double temperature_K);

struct DropKinematics {
  double distance_m;
  double velocity_m_per_s;
};
DropKinematics drop_kinematics(double t_seconds);

/// Initial alignment-decay rate kappa = sqrt(2 kB T / I).
double shear_rate(const RotorSpec& spec, double temperature_K);

/// Reduced (dimensionless) parameters used by the state and evolution kernels.
struct ReducedParameters {
  double kT_over_B;
  double v0_over_B;
};
ReducedParameters reduce(const RotorSpec& spec, double v0_J, double temperature_K);

struct Preset {
  std::string name;
  std::string description;
  RotorSpec rotor;
  TrapSpec trap;
  double temperature_K;
};

const std::vector<Preset>& preset_registry();
/// Case-insensitive lookup; std::nullopt for unknown names.
std::optional<Preset> find_preset(std::string_view name);

} // namespace nanorevival
