#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/config.hpp"

namespace nlslab {

inline constexpr const char* kCodeVersion = "0.1.0";

/// Output root when NLSLAB_OUTPUT_ROOT is unset.
inline constexpr const char* kDefaultOutputRoot = "runs";
inline constexpr const char* kOutputRootEnv = "NLSLAB_OUTPUT_ROOT";

/// $NLSLAB_OUTPUT_ROOT or "runs".
std::filesystem::path default_output_root();

/// Versioned CSV time series. The first line is "# nlslab-<kind> v<version>";
/// further '#' lines carry metadata; then one header row and numeric rows.
/// Empty cells are disabled or unavailable values (read back as NaN).
struct CsvTable {
  std::string kind;
  int version = 1;
  std::vector<std::string> metadata;  // comment lines without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; FormatError when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

inline constexpr int kTrajectoryCsvVersion = 1;
inline constexpr int kModulationCsvVersion = 1;
inline constexpr int kVirialCsvVersion = 1;

extern const std::vector<std::string> kTrajectoryColumns;
extern const std::vector<std::string> kModulationColumns;
extern const std::vector<std::string> kVirialColumns;

void write_csv(const CsvTable& t, const std::filesystem::path& path);
/// Rejects files whose kind differs from expected_kind or whose version is
/// not the one this build writes.
CsvTable read_csv(const std::filesystem::path& path, const std::string& expected_kind);

struct RunManifest {
  nlohmann::json scenario;
  std::string code_version = kCodeVersion;
  std::string started;
  std::string finished;
  std::filesystem::path run_dir;
  /// Relative to run_dir; every listed file exists once the manifest does.
  std::vector<std::string> output_files;
  /// "complete", "halted" (blowup criterion met) or "failed" (numerical failure).
  std::string status = "complete";
  std::optional<std::string> halted;
  int passed = 0;
  int warned = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

struct RunOptions {
  std::filesystem::path output_root = default_output_root();
  /// Called after each output file is written (with its file name), before
  /// the manifest. Tests use it to interrupt a run between writes.
  std::function<void(const std::string&)> after_write;
};

/// Validate, build the initial field, evolve, track, evaluate diagnostics and
/// write trajectory.csv, virial.csv, modulation.csv (when tracked), final_field.nlsf,
/// report.json, plot.py and finally manifest.json (atomically, via rename) into
/// a fresh directory <root>/<name>-<UTC timestamp>[-k].
/// ConfigError on invalid configs (including data the grid cannot resolve).
/// A numerical failure still writes the partial series and a "failed" manifest.
RunManifest run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

struct BatchResult {
  std::vector<RunManifest> manifests;  // successful runs, in input order
  /// (config name, error message) for runs that threw.
  std::vector<std::pair<std::string, std::string>> failures;
};

/// Run configs on up to `parallelism` worker threads. Each run is independent
/// and deterministic; a failing run does not stop the others.
BatchResult batch(const std::vector<ScenarioConfig>& configs, std::size_t parallelism, const RunOptions& opt = {});

/// Manifest of a finished run; FormatError when missing (incomplete run).
RunManifest read_manifest(const std::filesystem::path& run_dir);

/// Human-readable summary of a completed run directory.
std::string summarize_run(const std::filesystem::path& run_dir);

/// Matplotlib script that plots the run's CSV files from its own directory.
std::string plot_script();

}  // namespace nlslab
