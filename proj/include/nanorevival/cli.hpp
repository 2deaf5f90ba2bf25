#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nanorevival/decorates.hpp"
#include "nanorevival/evolve.hpp"
#include "nanorevival/physcore.hpp"

namespace nanorevival::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 2, kNumerical = 3 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  std::optional<std::string> preset;
  RotorSpec rotor;
  TrapSpec trap;

  double temperature_K = 0.0;
  std::string method = "exact";  // "exact" | "semiclassical"
  double tail_epsilon = 1e-8;
  int jmax_override = 0;

  TimeGrid grid;

  bool has_environment = false;
  EnvironmentSpec environment;

  bool has_torque = false;
  std::vector<double> torques_Nm;
  int revival_index = 10;

  nlohmann::json canonical;  // parsed document, keys sorted
};

/// Validates a scenario document; unknown keys and out-of-range values raise ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
std::string content_hash(const nlohmann::json& doc);

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double x);

void write_trace_csv(std::ostream& out, const AlignmentTrace& trace, const std::vector<std::string>& manifest);

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nanorevival::cli
