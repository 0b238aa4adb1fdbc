#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/diagnostics.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/evolution.hpp"

namespace nlslab {

/// Every violated constraint of a scenario, one message per entry, each
/// starting with the offending key (e.g. "solver.dt_init: ...").
class ConfigError : public InputError {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

enum class InitialKind { Soliton, Pseudoconformal, PerturbedSoliton, File };

struct InitialData {
  InitialKind kind = InitialKind::Soliton;
  /// Orbit parameters shared by soliton, pseudoconformal and the perturbed base.
  double lambda = 1.0;
  double theta = 0.0;
  double x0 = 0.0;
  double xi = 0.0;
  /// Pseudoconformal blowup time and start time (t0 < T).
  double blowup_time = 0.0;
  double t0 = -2.0;
  /// Perturbed soliton: L2 size of the band-limited noise, seeded by rng_seed.
  double noise_amplitude = 1e-3;
  bool admissible = true;
  bool even = false;
  bool mass_renormalize = true;
  /// File initial data (binary or CSV field file).
  std::string path;
};

struct GridSpec {
  double half_length = 32.0;
  std::size_t n = 2048;
};

enum class ModulationSetting { Off, Symmetric2, Full4 };

struct DiagnosticsSpec {
  bool mass = true;
  bool energy = true;
  bool gn_ratio = true;
  bool variance = true;
  bool morawetz = true;
  bool truncated_energy = true;
  /// k in E(P_{<= k + 9} u).
  int truncation_k = 0;
  /// R <= 0 means L / 4.
  MorawetzConfig morawetz_config{0.0, 0.5, 0, TaperProfile::QuinticSmoothstep};
};

struct ScenarioConfig {
  std::string name = "scenario";
  InitialData initial;
  GridSpec grid;
  SolverConfig solver = default_scenario_solver();
  /// Evolution length from the start time (0, or t0 for pseudoconformal data).
  double t_final = 1.0;
  DiagnosticsSpec diagnostics;
  ModulationSetting modulation = ModulationSetting::Full4;
  std::uint64_t rng_seed = 1;

  /// The harness strides output by 20 accepted steps unless told otherwise.
  static SolverConfig default_scenario_solver();

  /// Every violated constraint; empty when valid. Does not touch the file system.
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing all violations.
  void validate() const;
  /// Start time of the evolution.
  double start_time() const;
};

/// Parse TOML-style text. Unknown keys are violations.
ScenarioConfig parse_toml_config(const std::string& text);
/// Parse the same structure from JSON.
ScenarioConfig parse_json_config(const std::string& text);
/// By extension: .json is JSON, anything else TOML.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Round-trippable echo (parse_json_config(to_json(c).dump()) == c field by field).
nlohmann::json to_json(const ScenarioConfig& c);

std::string to_string(InitialKind k);
std::string to_string(ModulationSetting m);

}  // namespace nlslab
