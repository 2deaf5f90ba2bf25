#include "nanorevival/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "nanorevival/macroscopicity.hpp"
#include "nanorevival/numerics.hpp"
#include "nanorevival/rotorstate.hpp"
#include "nanorevival/torquesense.hpp"

namespace nanorevival::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& block, const std::string& name, const std::set<std::string>& allowed) {
  if (!block.is_object()) throw ConfigError("'" + name + "' must be an object");
  for (const auto& [key, value] : block.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
}

double number(const json& block, const std::string& block_name, const std::string& key) {
  const auto& v = block.at(key);
  if (!v.is_number()) throw ConfigError("'" + block_name + "." + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + block_name + "." + key + "' must be finite");
  return x;
}

std::optional<double> optional_number(const json& block, const std::string& block_name,
                                      const std::string& key) {
  if (!block.contains(key)) return std::nullopt;
  return number(block, block_name, key);
}

double positive(double x, const std::string& what) {
  if (!(x > 0.0)) throw ConfigError(what + " must be positive");
  return x;
}

double non_negative(double x, const std::string& what) {
  if (!(x >= 0.0)) throw ConfigError(what + " must be non-negative");
  return x;
}

int integer(const json& block, const std::string& block_name, const std::string& key) {
  const auto& v = block.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + block_name + "." + key + "' must be an integer");
  return v.get<int>();
}

} // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, "config", {"particle", "trap", "state", "evolution", "environment", "torque"});
  ScenarioConfig cfg;
  cfg.canonical = doc;

  if (!doc.contains("particle")) throw ConfigError("missing 'particle' block");
  const json& particle = doc.at("particle");
  reject_unknown(particle, "particle",
                 {"preset", "mass_amu", "length_nm", "deff_nm", "delta_alpha", "depth_override_J"});
  std::optional<Preset> preset;
  if (particle.contains("preset")) {
    if (!particle.at("preset").is_string()) throw ConfigError("'particle.preset' must be a string");
    const auto name = particle.at("preset").get<std::string>();
    preset = find_preset(name);
    if (!preset) throw ConfigError("unknown preset '" + name + "'");
    cfg.preset = preset->name;
    cfg.rotor = preset->rotor;
    cfg.trap = preset->trap;
    cfg.temperature_K = preset->temperature_K;
  }
  if (auto v = optional_number(particle, "particle", "mass_amu"))
    cfg.rotor.mass_kg = amu_to_kg(positive(*v, "particle.mass_amu"));
  else if (!preset)
    throw ConfigError("missing 'particle.mass_amu'");
  if (auto v = optional_number(particle, "particle", "length_nm"))
    cfg.rotor.length_m = positive(*v, "particle.length_nm") * 1e-9;
  else if (!preset)
    throw ConfigError("missing 'particle.length_nm'");
  if (auto v = optional_number(particle, "particle", "deff_nm"))
    cfg.rotor.effective_diameter_m = non_negative(*v, "particle.deff_nm") * 1e-9;
  if (auto v = optional_number(particle, "particle", "delta_alpha"))
    cfg.rotor.polarizability_anisotropy = non_negative(*v, "particle.delta_alpha");
  if (auto v = optional_number(particle, "particle", "depth_override_J"))
    cfg.trap.depth_override_J = non_negative(*v, "particle.depth_override_J");

  if (doc.contains("trap")) {
    const json& trap = doc.at("trap");
    reject_unknown(trap, "trap", {"power_W", "waist_um"});
    if (auto v = optional_number(trap, "trap", "power_W")) cfg.trap.power_W = non_negative(*v, "trap.power_W");
    if (auto v = optional_number(trap, "trap", "waist_um")) cfg.trap.waist_m = positive(*v, "trap.waist_um") * 1e-6;
  } else if (!preset) {
    if (!cfg.trap.depth_override_J) throw ConfigError("missing 'trap' block");
  }

  if (doc.contains("state")) {
    const json& state = doc.at("state");
    reject_unknown(state, "state", {"temperature_K", "method", "tail_epsilon", "jmax_override"});
    if (auto v = optional_number(state, "state", "temperature_K")) cfg.temperature_K = *v;
    if (state.contains("method")) {
      if (!state.at("method").is_string()) throw ConfigError("'state.method' must be a string");
      cfg.method = state.at("method").get<std::string>();
      if (cfg.method != "exact" && cfg.method != "semiclassical")
        throw ConfigError("'state.method' must be \"exact\" or \"semiclassical\"");
    }
    if (auto v = optional_number(state, "state", "tail_epsilon")) {
      if (!(*v > 0.0 && *v < 1.0)) throw ConfigError("state.tail_epsilon must lie in (0, 1)");
      cfg.tail_epsilon = *v;
    }
    if (state.contains("jmax_override")) {
      cfg.jmax_override = integer(state, "state", "jmax_override");
      if (cfg.jmax_override < 2) throw ConfigError("state.jmax_override must be at least 2");
    }
  }
  positive(cfg.temperature_K, "state.temperature_K");

  if (doc.contains("evolution")) {
    const json& evo = doc.at("evolution");
    reject_unknown(evo, "evolution", {"revivals", "points", "refine_revivals"});
    if (auto v = optional_number(evo, "evolution", "revivals")) cfg.grid.revivals = positive(*v, "evolution.revivals");
    if (evo.contains("points")) {
      cfg.grid.points = integer(evo, "evolution", "points");
      if (cfg.grid.points < 2) throw ConfigError("evolution.points must be at least 2");
    }
    if (evo.contains("refine_revivals")) {
      if (!evo.at("refine_revivals").is_boolean()) throw ConfigError("'evolution.refine_revivals' must be a boolean");
      cfg.grid.refine_revivals = evo.at("refine_revivals").get<bool>();
    }
  }

  if (doc.contains("environment")) {
    const json& env = doc.at("environment");
    reject_unknown(env, "environment", {"pressure_mbar", "gas_mass_amu", "gas_temperature_K", "emission_rate_hz"});
    cfg.has_environment = true;
    const double p = non_negative(optional_number(env, "environment", "pressure_mbar").value_or(0.0),
                                  "environment.pressure_mbar");
    const double mg = positive(optional_number(env, "environment", "gas_mass_amu").value_or(28.0),
                               "environment.gas_mass_amu");
    const double tg = positive(optional_number(env, "environment", "gas_temperature_K").value_or(300.0),
                               "environment.gas_temperature_K");
    const double emi = non_negative(optional_number(env, "environment", "emission_rate_hz").value_or(0.0),
                                    "environment.emission_rate_hz");
    cfg.environment = EnvironmentSpec::from_mbar(p, mg, tg, emi);
  }

  if (doc.contains("torque")) {
    const json& torque = doc.at("torque");
    reject_unknown(torque, "torque", {"next_Nm_list", "revival_index"});
    cfg.has_torque = true;
    if (!torque.contains("next_Nm_list") || !torque.at("next_Nm_list").is_array() ||
        torque.at("next_Nm_list").empty())
      throw ConfigError("'torque.next_Nm_list' must be a non-empty array");
    for (const auto& v : torque.at("next_Nm_list")) {
      if (!v.is_number()) throw ConfigError("'torque.next_Nm_list' entries must be numbers");
      cfg.torques_Nm.push_back(non_negative(v.get<double>(), "torque.next_Nm_list entry"));
    }
    if (torque.contains("revival_index")) {
      cfg.revival_index = integer(torque, "torque", "revival_index");
      if (cfg.revival_index < 1) throw ConfigError("torque.revival_index must be at least 1");
    }
  }

  try {
    validate(cfg.rotor);
    validate(cfg.trap);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::string content_hash(const json& doc) {
  const std::string text = doc.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const AlignmentTrace& tr, const std::vector<std::string>& manifest) {
  for (const auto& line : manifest) out << "# " << line << '\n';
  out << "tau,t_seconds,alignment_unitary,alignment_decohered,alignment_classical,envelope\n";
  for (std::size_t i = 0; i < tr.size(); ++i)
    out << format_number(tr.tau[i]) << ',' << format_number(tr.t_seconds[i]) << ','
        << format_number(tr.alignment_unitary[i]) << ',' << format_number(tr.alignment_decohered[i]) << ','
        << format_number(tr.alignment_classical[i]) << ',' << format_number(tr.envelope[i]) << '\n';
}

namespace {

struct Manifest {
  std::vector<std::string> lines;
  void add(const std::string& key, const std::string& value) { lines.push_back(key + " " + value); }
};

Manifest base_manifest(const ScenarioConfig& cfg, const std::string& command) {
  Manifest m;
  m.add("nanorevival", NANOREVIVAL_VERSION);
  m.add("command", command);
  m.add("config_hash", content_hash(cfg.canonical));
  m.add("constants", constants::constant_set);
  return m;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write output '" + path + "'");
  return out;
}

struct PreparedBand {
  BandedDensity band;
  double tail = 0.0;
  bool from_cache = false;
};

// Exact or semiclassical band, optionally served from the on-disk cache.
PreparedBand prepare_band(const ScenarioConfig& cfg, const std::string& cache_dir, std::ostream& err) {
  const double v0 = trap_depth(cfg.rotor, cfg.trap);
  const auto reduced = reduce(cfg.rotor, v0, cfg.temperature_K);
  const BasisTruncation trunc{cfg.jmax_override, cfg.tail_epsilon};

  json key_doc = {{"version", NANOREVIVAL_VERSION},
                  {"method", cfg.method},
                  {"kT_over_B", reduced.kT_over_B},
                  {"v0_over_B", reduced.v0_over_B},
                  {"j_max", cfg.jmax_override},
                  {"tail_epsilon", cfg.tail_epsilon}};
  const std::string key = content_hash(key_doc);
  std::filesystem::path cache_file;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    cache_file = std::filesystem::path(cache_dir) / (key + ".nrvband");
    if (auto band = load_band(cache_file, key)) {
      const double tail = band_tail_estimate(*band, reduced);
      return {std::move(*band), tail, true};
    }
  }

  PreparedBand out;
  if (cfg.method == "semiclassical") {
    std::string warning;
    out.band = prepare_semiclassical(reduced, trunc, 1, &warning);
    if (!warning.empty()) err << "warning: " << warning << '\n';
    out.tail = band_tail_estimate(out.band, reduced);
  } else {
    ExactOptions opt;
    opt.truncation = trunc;
    auto state = prepare_exact(reduced, opt);
    out.tail = state.tail_estimate;
    out.band = std::move(state.band);
  }
  if (!cache_file.empty()) save_band(cache_file, key, out.band);
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, bool no_decoherence,
                 bool classical_only, const std::string& cache_dir, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(config_path);
  const double t_rev = revival_time(cfg.rotor);
  const double kappa = shear_rate(cfg.rotor, cfg.temperature_K);
  const double v0 = trap_depth(cfg.rotor, cfg.trap);

  TraceInputs in;
  in.revival_time_s = t_rev;
  in.kappa = kappa;
  in.gamma = (cfg.has_environment && !no_decoherence) ? total_rate(cfg.rotor, cfg.environment) : 0.0;
  const auto tau = make_tau_grid(cfg.grid, kappa * t_rev);

  Manifest m = base_manifest(cfg, "simulate");
  AlignmentTrace tr;
  if (classical_only) {
    in.initial_alignment = classical_alignment(v0 / (constants::boltzmann * cfg.temperature_K));
    tr = classical_trace(in, tau);
    m.add("method", "classical");
    m.add("j_max", "none");
  } else {
    const auto prepared = prepare_band(cfg, cache_dir, err);
    const AlignmentKernel kernel(prepared.band);
    in.initial_alignment = kernel(0.0);
    tr = trace(kernel, in, tau);
    m.add("method", cfg.method);
    m.add("j_max", std::to_string(prepared.band.j_max()));
    m.add("tail_estimate", format_number(prepared.tail));
    if (prepared.from_cache) m.add("state_cache", "hit");
  }
  m.add("gamma_per_s", format_number(in.gamma));
  m.add("wall_time_s", format_number(elapsed_s(start)));
  auto out = open_output(out_path);
  write_trace_csv(out, tr, m.lines);
  return kSuccess;
}

int cmd_torque(const std::string& config_path, const std::string& out_path, const std::string& cache_dir,
               std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(config_path);
  if (!cfg.has_torque) throw ConfigError("torque command needs a 'torque' block");
  const double b = rotational_energy_unit(cfg.rotor);
  const auto reduced = reduce(cfg.rotor, trap_depth(cfg.rotor, cfg.trap), cfg.temperature_K);
  std::vector<double> n_over_b;
  for (double n : cfg.torques_Nm) {
    n_over_b.push_back(n / b);
    const auto warning = torque_validity_warning(reduced, n / b);
    if (!warning.empty()) err << "warning: " << warning << '\n';
  }
  const auto prepared = prepare_band(cfg, cache_dir, err);
  const auto sweep = revival_decay_sweep(prepared.band, cfg.revival_index, n_over_b);
  if (!sweep.monotone) err << "warning: revival alignment is not monotone in the torque\n";

  Manifest m = base_manifest(cfg, "torque");
  m.add("method", cfg.method);
  m.add("j_max", std::to_string(prepared.band.j_max()));
  m.add("tail_estimate", format_number(prepared.tail));
  m.add("revival_index", std::to_string(cfg.revival_index));
  m.add("energy_unit_J", format_number(b));
  m.add("wall_time_s", format_number(elapsed_s(start)));
  auto out = open_output(out_path);
  for (const auto& line : m.lines) out << "# " << line << '\n';
  out << "n_ext_Nm,n_ext_over_B,revival_alignment\n";
  for (std::size_t i = 0; i < sweep.rows.size(); ++i)
    out << format_number(cfg.torques_Nm[i]) << ',' << format_number(sweep.rows[i].n_ext_over_B) << ','
        << format_number(sweep.rows[i].alignment) << '\n';
  return kSuccess;
}

json preset_json(const Preset& p) {
  json j = {{"name", p.name},
            {"description", p.description},
            {"mass_amu", kg_to_amu(p.rotor.mass_kg)},
            {"length_nm", p.rotor.length_m * 1e9},
            {"deff_nm", p.rotor.effective_diameter_m * 1e9},
            {"trap_power_W", p.trap.power_W},
            {"trap_waist_um", p.trap.waist_m * 1e6},
            {"temperature_K", p.temperature_K},
            {"revival_time_s", revival_time(p.rotor)},
            {"mean_j", mean_j(p.rotor, p.temperature_K)},
            {"shear_rate_per_s", shear_rate(p.rotor, p.temperature_K)}};
  return j;
}

int cmd_preset(const std::string& action, const std::string& name, bool as_json, std::ostream& out) {
  if (action == "list") {
    if (as_json) {
      json arr = json::array();
      for (const auto& p : preset_registry()) arr.push_back(preset_json(p));
      out << arr.dump(2) << '\n';
    } else {
      for (const auto& p : preset_registry()) out << p.name << "  " << p.description << '\n';
    }
    return kSuccess;
  }
  const auto p = find_preset(name);
  if (!p) throw ConfigError("unknown preset '" + name + "'");
  const json j = preset_json(*p);
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << "name            " << p->name << '\n'
        << "description     " << p->description << '\n'
        << "mass_amu        " << format_number(j["mass_amu"]) << '\n'
        << "length_nm       " << format_number(j["length_nm"]) << '\n'
        << "deff_nm         " << format_number(j["deff_nm"]) << '\n'
        << "temperature_K   " << format_number(p->temperature_K) << '\n'
        << "revival_time_ms " << format_number(revival_time(p->rotor) * 1e3) << '\n'
        << "mean_j          " << format_number(j["mean_j"]) << '\n';
  }
  return kSuccess;
}

int cmd_macro(double mass_amu, double length_nm, int revival_n, double f, bool as_json, std::ostream& out) {
  if (!(mass_amu > 0.0)) throw ConfigError("--mass-amu must be positive");
  if (!(length_nm > 0.0)) throw ConfigError("--length-nm must be positive");
  if (revival_n < 1) throw ConfigError("--revival-n must be at least 1");
  if (!(f > 0.0 && f < 1.0)) throw ConfigError("--visibility-f must lie in (0, 1)");
  const auto rotor = RotorSpec::from_amu(mass_amu, length_nm * 1e-9);
  MacroInputs in;
  in.mass_kg = rotor.mass_kg;
  in.length_m = rotor.length_m;
  in.revival_index = revival_n;
  in.visibility_ratio = f;
  in.revival_time_s = revival_time(rotor);
  const auto tm = theta_max();
  const double mu = mu_bound(in, tm.theta_m);
  if (as_json) {
    out << json{{"T_rev", in.revival_time_s}, {"theta_m", tm.theta_m}, {"x_star", tm.x_star}, {"mu", mu}}.dump(2)
        << '\n';
  } else {
    out << "T_rev_s  " << format_number(in.revival_time_s) << '\n'
        << "theta_m  " << format_number(tm.theta_m) << '\n'
        << "x_star   " << format_number(tm.x_star) << '\n'
        << "mu       " << format_number(mu) << '\n';
  }
  return kSuccess;
}

int cmd_rates(const std::string& config_path, bool as_json, std::ostream& out) {
  const ScenarioConfig cfg = load_config(config_path);
  if (!cfg.has_environment) throw ConfigError("rates command needs an 'environment' block");
  const double gas = gas_rate(cfg.rotor, cfg.environment);
  const double total = total_rate(cfg.environment, gas);
  const double inv = total > 0.0 ? 1.0 / total : std::numeric_limits<double>::infinity();
  if (as_json) {
    json j = {{"gamma_gas", gas}, {"gamma_total", total}};
    j["one_over_gamma"] = std::isfinite(inv) ? json(inv) : json(nullptr);
    out << j.dump(2) << '\n';
  } else {
    out << "gamma_gas_per_s    " << format_number(gas) << '\n'
        << "gamma_total_per_s  " << format_number(total) << '\n'
        << "one_over_gamma_s   " << format_number(inv) << '\n';
  }
  return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orientational quantum revivals of levitated nanorotors"};
  app.set_version_flag("--version", NANOREVIVAL_VERSION);
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: NANOREVIVAL_THREADS or all cores)");

  bool as_json = false;
  auto* preset = app.add_subcommand("preset", "list or show particle presets");
  std::string preset_action, preset_name;
  preset->add_option("action", preset_action, "list | show")->required()->check(CLI::IsMember({"list", "show"}));
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--json", as_json, "JSON output");

  auto* simulate = app.add_subcommand("simulate", "alignment trace CSV from a scenario config");
  std::string config_path, out_path, cache_dir;
  bool no_decoherence = false, classical_only = false;
  simulate->add_option("--config", config_path, "scenario JSON")->required();
  simulate->add_option("--out", out_path, "output CSV")->required();
  simulate->add_flag("--no-decoherence", no_decoherence, "force the decoherence rate to zero");
  simulate->add_flag("--classical-only", classical_only, "skip the quantum state; classical channels only");
  simulate->add_option("--cache-dir", cache_dir, "directory for cached initial states");

  auto* torque = app.add_subcommand("torque", "revival height versus external torque");
  torque->add_option("--config", config_path, "scenario JSON with a torque block")->required();
  torque->add_option("--out", out_path, "output CSV")->required();
  torque->add_option("--cache-dir", cache_dir, "directory for cached initial states");

  auto* macro = app.add_subcommand("macro", "macroscopicity bound");
  double mass_amu = 0.0, length_nm = 0.0, f = 0.0;
  int revival_n = 1;
  macro->add_option("--mass-amu", mass_amu, "particle mass in amu")->required();
  macro->add_option("--length-nm", length_nm, "rod length in nm")->required();
  macro->add_option("--revival-n", revival_n, "revival index n")->required();
  macro->add_option("--visibility-f", f, "observed-to-expected visibility")->required();
  macro->add_flag("--json", as_json, "JSON output");

  auto* rates = app.add_subcommand("rates", "decoherence rates of a scenario");
  rates->add_option("--config", config_path, "scenario JSON")->required();
  rates->add_flag("--json", as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*preset) {
      if (preset_action == "show" && preset_name.empty()) throw ConfigError("preset show needs a NAME");
      return cmd_preset(preset_action, preset_name, as_json, out);
    }
    if (*simulate) return cmd_simulate(config_path, out_path, no_decoherence, classical_only, cache_dir, err);
    if (*torque) return cmd_torque(config_path, out_path, cache_dir, err);
    if (*macro) return cmd_macro(mass_amu, length_nm, revival_n, f, as_json, out);
    if (*rates) return cmd_rates(config_path, as_json, out);
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << " (raise state.tail_epsilon or state.jmax_override)\n";
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kValidation;
}

} // namespace nanorevival::cli
