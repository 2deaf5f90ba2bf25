#include "nanorevival/physcore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace nanorevival {

using namespace constants;

double amu_to_kg(double amu) { return amu * atomic_mass_unit; }
double kg_to_amu(double kg) { return kg / atomic_mass_unit; }

RotorSpec RotorSpec::from_amu(double mass_amu, double length_m, double effective_diameter_m) {
  RotorSpec spec;
  spec.mass_kg = amu_to_kg(mass_amu);
  spec.length_m = length_m;
  spec.effective_diameter_m = effective_diameter_m;
  return spec;
}

void validate(const RotorSpec& spec) {
  if (!(spec.mass_kg > 0.0) || !std::isfinite(spec.mass_kg))
    throw std::invalid_argument("rotor mass must be positive");
  if (!(spec.length_m > 0.0) || !std::isfinite(spec.length_m))
    throw std::invalid_argument("rotor length must be positive");
  if (!(spec.effective_diameter_m >= 0.0))
    throw std::invalid_argument("effective diameter must be non-negative");
}

void validate(const TrapSpec& trap) {
  if (!(trap.power_W >= 0.0)) throw std::invalid_argument("trap power must be non-negative");
  if (!(trap.waist_m > 0.0)) throw std::invalid_argument("trap waist must be positive");
  if (trap.depth_override_J && !(*trap.depth_override_J >= 0.0))
    throw std::invalid_argument("trap depth override must be non-negative");
}

double moment_of_inertia(const RotorSpec& spec) {
  validate(spec);
  return spec.mass_kg * spec.length_m * spec.length_m / 12.0;
}

double rotational_energy_unit(const RotorSpec& spec) {
  return hbar * hbar / (2.0 * moment_of_inertia(spec));
}

double revival_time(const RotorSpec& spec) { return 2.0 * pi * moment_of_inertia(spec) / hbar; }

double trap_depth(const RotorSpec& spec, const TrapSpec& trap) {
  validate(trap);
  if (trap.depth_override_J) return *trap.depth_override_J;
  if (!spec.polarizability_anisotropy)
    throw std::invalid_argument(
        "trap depth needs either a polarizability anisotropy or an explicit depth override");
  return 4.0 * *spec.polarizability_anisotropy * trap.power_W /
         (pi * speed_of_light * vacuum_permittivity * trap.waist_m * trap.waist_m);
}

double mean_j(const RotorSpec& spec, double temperature_K) {
  if (!(temperature_K >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  return std::sqrt(pi * moment_of_inertia(spec) * boltzmann * temperature_K / (2.0 * hbar * hbar));
}

DropKinematics drop_kinematics(double t_seconds) {
  if (!(t_seconds >= 0.0)) throw std::invalid_argument("drop time must be non-negative");
  return {0.5 * standard_gravity * t_seconds * t_seconds, standard_gravity * t_seconds};
}

double shear_rate(const RotorSpec& spec, double temperature_K) {
  if (!(temperature_K >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  return std::sqrt(2.0 * boltzmann * temperature_K / moment_of_inertia(spec));
}

ReducedParameters reduce(const RotorSpec& spec, double v0_J, double temperature_K) {
  const double b = rotational_energy_unit(spec);
  return {boltzmann * temperature_K / b, v0_J / b};
}

const std::vector<Preset>& preset_registry() {
  // Polarizability anisotropies are not tabulated here; runs supply a depth override.
  static const std::vector<Preset> registry = [] {
    std::vector<Preset> r;
    TrapSpec tweezer;
    tweezer.power_W = 5.0;
    tweezer.waist_m = 30e-6;
    r.push_back({"CNT", "double-walled carbon nanotube, d = 1.5 nm, d_eff = 2d",
                 RotorSpec::from_amu(1.9e5, 50e-9, 3e-9), tweezer, 100e-6});
    r.push_back({"SNR", "silicon nanorod, d = 5 nm, d_eff = 2d",
                 RotorSpec::from_amu(1.4e6, 50e-9, 10e-9), tweezer, 100e-6});
    r.push_back({"TMV", "tobacco mosaic virus, d = 20 nm (macroscopicity only)",
                 RotorSpec::from_amu(4e7, 300e-9, 40e-9), tweezer, 100e-6});
    return r;
  }();
  return registry;
}

std::optional<Preset> find_preset(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  };
  const std::string key = lower(name);
  for (const auto& p : preset_registry())
    if (lower(p.name) == key) return p;
  return std::nullopt;
}

} // namespace nanorevival
