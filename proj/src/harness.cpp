#include "nlslab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlslab/diagnostics.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/noise.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symmetries.hpp"

namespace nlslab {

namespace fs = std::filesystem;

const std::vector<std::string> kTrajectoryColumns = {"t",        "mass",     "energy",           "gn_ratio",
                                                     "variance", "morawetz", "truncated_energy", "mass_drift",
                                                     "energy_drift", "eps_l2"};
const std::vector<std::string> kModulationColumns = {"t",       "s",       "lambda",  "gamma", "x0",
                                                     "xi",      "eps_l2",  "r_lambda", "r_gamma", "r_x",
                                                     "r_xi",    "virial_residual"};
const std::vector<std::string> kVirialColumns = {"t",    "variance", "dv_dt",           "d2v_dt2",         "rate",
                                                 "energy16", "first_residual", "second_residual", "leak"};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Energy drift above this is reported as a warning.
constexpr double kEnergyDriftWarn = 1e-6;
// Spectral mass beyond 2/3 of Nyquist, relative to the total, that still counts as resolved.
constexpr double kResolutionTail = 1e-20;

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now(bool compact) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, compact ? "%Y%m%dT%H%M%S" : "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, compact ? "%s%03dZ" : "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

fs::path fresh_run_dir(const fs::path& root, const std::string& name) {
  fs::create_directories(root);
  const std::string base = name + "-" + utc_now(true);
  for (int k = 0;; ++k) {
    fs::path p = root / (k == 0 ? base : base + "-" + std::to_string(k));
    if (fs::create_directory(p)) return p;
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::trunc);
  os << text;
  if (!os) throw FormatError("write failed for " + p.string());
}

ModulationParams orbit_params(const InitialData& in) { return {in.lambda, -in.theta, in.x0, in.xi}; }

Field build_initial(const ScenarioConfig& cfg) {
  const auto& in = cfg.initial;
  if (in.kind == InitialKind::File) {
    Field u = read_field(in.path);
    const Grid& g = u.grid();
    if (g.size() != cfg.grid.n || std::abs(g.half_length() - cfg.grid.half_length) > 1e-12 * cfg.grid.half_length)
      throw ConfigError({"grid: field file " + in.path + " has L = " + fmt(g.half_length()) + ", n = " +
                         std::to_string(g.size()) + ", which differs from the configured grid"});
    return u;
  }
  const auto g = Grid::make(cfg.grid.half_length, cfg.grid.n);
  switch (in.kind) {
    case InitialKind::Soliton:
      return soliton(0.0, in.lambda, in.theta, in.x0, in.xi, g);
    case InitialKind::Pseudoconformal:
      return pseudoconformal_soliton(in.t0, in.blowup_time, in.lambda, in.theta, in.x0, in.xi, g);
    case InitialKind::PerturbedSoliton: {
      NoiseOptions no;
      no.admissible = in.admissible;
      no.even = in.even;
      no.mass_renormalize = in.mass_renormalize;
      const Field eps = band_limited_noise(g, in.noise_amplitude, cfg.rng_seed, no);
      // soliton(0, ...) = apply(orbit_params, Q), so carry Q + eps along the same map
      return apply(orbit_params(in), sample_profile(Profile::Q, g) + eps);
    }
    case InitialKind::File:
      break;
  }
  throw InputError("unreachable initial data kind");
}

void check_resolution(const Field& u) {
  std::vector<std::string> v;
  if (!u.is_finite()) v.push_back("initial: field has non-finite samples");
  const double peak = lp_norm(u, kInfinityNorm);
  if (peak == 0.0) v.push_back("initial: field is identically zero");
  if (peak > 0.0 && edge_magnitude(u) > 1e-8 * peak) v.push_back("initial: support reaches the outer quarter of the box");
  const auto c = spectrum(u);
  const auto k = u.grid().wavenumbers();
  double total = 0, tail = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    total += std::norm(c[j]);
    if (std::abs(k[j]) > 2.0 * u.grid().nyquist() / 3.0) tail += std::norm(c[j]);
  }
  if (total > 0 && tail > kResolutionTail * total)
    v.push_back("grid.n: initial data is not resolved (spectral mass fraction " + fmt(tail / total) +
                " above 2/3 Nyquist)");
  if (!v.empty()) throw ConfigError(v);
}

struct Series {
  std::vector<double> t;
  std::vector<Field> fields;
  std::vector<double> mass_drift, energy_drift;
};

Series collect(const Trajectory& tr, double t0) {
  Series s;
  for (const auto& st : tr.steps) {
    const double t = t0 + st.t;
    if (!s.t.empty() && !(std::abs(t - t0) > std::abs(s.t.back() - t0))) continue;
    s.t.push_back(t);
    s.fields.push_back(st.field);
    s.mass_drift.push_back(st.mass_drift);
    s.energy_drift.push_back(st.energy_drift);
  }
  return s;
}

nlohmann::json eps_json(const EpsStatistics& st) {
  return {{"frames", st.frames}, {"max", st.max},   {"mean", st.mean},
          {"rms", st.rms},       {"last", st.last}, {"weighted_integral", st.weighted_integral},
          {"s_integral", st.s_integral}};
}

}  // namespace

fs::path default_output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) : fs::path(kDefaultOutputRoot);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return j;
  throw FormatError("no column '" + name + "' in " + kind + " table");
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void write_csv(const CsvTable& t, const fs::path& path) {
  std::ostringstream os;
  os << "# nlslab-" << t.kind << " v" << t.version << '\n';
  for (const auto& m : t.metadata) os << "# " << m << '\n';
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << '\n';
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw InputError("csv row width differs from the header");
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << fmt(r[j]);
    os << '\n';
  }
  write_text(path, os.str());
}

CsvTable read_csv(const fs::path& path, const std::string& expected_kind) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty file " + path.string());
  const std::string prefix = "# nlslab-" + expected_kind + " v";
  if (line.rfind(prefix, 0) != 0) throw FormatError(path.string() + " is not an nlslab " + expected_kind + " table");
  t.kind = expected_kind;
  try {
    std::size_t used = 0;
    t.version = std::stoi(line.substr(prefix.size()), &used);
    if (used != line.size() - prefix.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw FormatError("bad version line in " + path.string());
  }
  if (t.version != 1) throw FormatError("unsupported " + expected_kind + " table version " + std::to_string(t.version));
  while (std::getline(is, line) && line.rfind("#", 0) == 0) t.metadata.push_back(line.substr(line.rfind("# ", 0) == 0 ? 2 : 1));
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  if (t.columns.empty()) throw FormatError("missing header row in " + path.string());
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t end = line.find(',', start);
      const std::string cell = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (cell.empty()) {
        row.push_back(kNaN);
      } else {
        char* stop = nullptr;
        row.push_back(std::strtod(cell.c_str(), &stop));
        if (*stop != '\0') throw FormatError("bad cell '" + cell + "' in " + path.string());
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (row.size() != t.columns.size()) throw FormatError("ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["code_version"] = code_version;
  j["started"] = started;
  j["finished"] = finished;
  j["run_dir"] = run_dir.string();
  j["output_files"] = output_files;
  j["status"] = status;
  j["halted"] = halted ? nlohmann::json(*halted) : nlohmann::json(nullptr);
  j["summary"] = {{"pass", passed}, {"warn", warned}};
  j["warnings"] = warnings;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.scenario = j.at("scenario");
    m.code_version = j.at("code_version").get<std::string>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.run_dir = j.at("run_dir").get<std::string>();
    m.output_files = j.at("output_files").get<std::vector<std::string>>();
    m.status = j.at("status").get<std::string>();
    if (!j.at("halted").is_null()) m.halted = j.at("halted").get<std::string>();
    m.passed = j.at("summary").at("pass").get<int>();
    m.warned = j.at("summary").at("warn").get<int>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

RunManifest read_manifest(const fs::path& run_dir) {
  const fs::path p = run_dir / "manifest.json";
  std::ifstream is(p);
  if (!is) throw FormatError("no manifest in " + run_dir.string() + " (run incomplete or not a run directory)");
  try {
    return RunManifest::from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("unreadable manifest: ") + e.what());
  }
}

RunManifest run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  RunManifest man;
  man.scenario = to_json(cfg);
  man.started = utc_now(false);

  const Field u0 = build_initial(cfg);
  check_resolution(u0);
  const double t0 = cfg.start_time();

  Trajectory traj;
  std::optional<std::string> failure;
  try {
    traj = evolve(u0, cfg.t_final, cfg.solver);
  } catch (const NumericalFailure& e) {
    traj = e.partial();
    failure = e.what();
  }
  const Series s = collect(traj, t0);

  man.run_dir = fresh_run_dir(opt.output_root, cfg.name);
  const auto written = [&](const std::string& file) {
    man.output_files.push_back(file);
    if (opt.after_write) opt.after_write(file);
  };

  std::vector<std::string> warnings = traj.warnings;
  const auto& dcfg = cfg.diagnostics;
  MorawetzConfig mcfg = dcfg.morawetz_config;
  if (mcfg.R <= 0.0) mcfg.R = cfg.grid.half_length / 4.0;

  // modulation
  std::optional<ModulationSeries> series;
  std::vector<ModulationResiduals> residuals;
  std::vector<double> virial_s;
  if (cfg.modulation != ModulationSetting::Off && !s.t.empty()) {
    const auto mode = cfg.modulation == ModulationSetting::Full4 ? ModulationMode::Full4 : ModulationMode::Symmetric2;
    series = track(s.t, s.fields, mode);
    if (series->truncated) warnings.push_back("modulation: " + *series->truncated);
    if (series->frames.size() >= 3) {
      residuals = ode_residuals(*series);
      virial_s = virial_in_s(*series);
    }
  }

  // trajectory.csv
  const double q_mass = ground_state_constants(u0.grid_ptr()).mass_sq;
  CsvTable tt{"trajectory", kTrajectoryCsvVersion, {}, kTrajectoryColumns, {}};
  tt.metadata.push_back("scenario " + cfg.name + " initial " + to_string(cfg.initial.kind) + " seed " +
                        std::to_string(cfg.rng_seed));
  tt.metadata.push_back("grid half_length=" + fmt(cfg.grid.half_length) + " n=" + std::to_string(cfg.grid.n));
  tt.metadata.push_back("solver dt_init=" + fmt(cfg.solver.dt_init) + " dt_safety=" + fmt(cfg.solver.dt_safety) +
                        " adaptive=" + (cfg.solver.adaptive ? "1" : "0") + " dealias=" + (cfg.solver.dealias ? "1" : "0") +
                        " output_every=" + std::to_string(cfg.solver.output_every));
  tt.metadata.push_back("diagnostics truncation_k=" + std::to_string(dcfg.truncation_k) + " morawetz_R=" + fmt(mcfg.R) +
                        " morawetz_eta1=" + fmt(mcfg.eta1) + " morawetz_k=" + std::to_string(mcfg.cutoff_level));
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    const Field& u = s.fields[j];
    double gn = kNaN;
    if (dcfg.gn_ratio) try {
        gn = gn_ratio(u, q_mass);
      } catch (const DomainError&) {
      }
    const double eps = series && j < series->frames.size() ? series->frames[j].eps_l2 : kNaN;
    tt.rows.push_back({s.t[j], dcfg.mass ? mass(u) : kNaN, dcfg.energy ? energy(u) : kNaN, gn,
                       dcfg.variance ? variance(u) : kNaN, dcfg.morawetz ? morawetz_potential(u, mcfg) : kNaN,
                       dcfg.truncated_energy ? truncated_energy(u, dcfg.truncation_k) : kNaN, s.mass_drift[j],
                       s.energy_drift[j], eps});
  }
  write_csv(tt, man.run_dir / "trajectory.csv");
  written("trajectory.csv");

  // virial.csv (times must increase; backward runs are reversed)
  nlohmann::json virial_json = nullptr;
  if (s.t.size() >= 3) {
    std::vector<double> vt = s.t;
    std::vector<Field> vf = s.fields;
    if (cfg.t_final < 0) {
      std::reverse(vt.begin(), vt.end());
      std::reverse(vf.begin(), vf.end());
    }
    const auto vv = variance_and_virial(vt, vf);
    CsvTable vtab{"virial", kVirialCsvVersion, {}, kVirialColumns, {}};
    double r1 = 0, r2 = 0;
    int leaks = 0;
    for (const auto& p : vv) {
      vtab.rows.push_back({p.t, p.variance, p.dv_dt, p.d2v_dt2, p.rate, p.energy16, p.first_residual,
                           p.second_residual, p.leak ? 1.0 : 0.0});
      r1 = std::max(r1, p.first_residual);
      r2 = std::max(r2, p.second_residual / std::max(std::abs(p.energy16), 1e-300));
      leaks += p.leak;
    }
    write_csv(vtab, man.run_dir / "virial.csv");
    written("virial.csv");
    virial_json = {{"max_first_residual", r1}, {"max_second_residual_relative", r2}, {"leak_samples", leaks}};
  }

  // modulation.csv
  nlohmann::json mod_json = nullptr;
  if (series) {
    CsvTable mt{"modulation", kModulationCsvVersion, {}, kModulationColumns, {}};
    mt.metadata.push_back(std::string("mode ") + to_string(cfg.modulation));
    ModulationResiduals worst;
    double worst_v = 0;
    for (std::size_t j = 0; j < series->frames.size(); ++j) {
      const auto& f = series->frames[j];
      const bool have = j < residuals.size();
      const ModulationResiduals r = have ? residuals[j] : ModulationResiduals{kNaN, kNaN, kNaN, kNaN};
      const double v = j < virial_s.size() ? virial_s[j] : kNaN;
      mt.rows.push_back({f.t, f.s, f.params.lambda, f.params.gamma, f.params.x0, f.params.xi, f.eps_l2, r.r_lambda,
                         r.r_gamma, r.r_x, r.r_xi, v});
      if (have) {
        worst.r_lambda = std::max(worst.r_lambda, std::abs(r.r_lambda));
        worst.r_gamma = std::max(worst.r_gamma, std::abs(r.r_gamma));
        worst.r_x = std::max(worst.r_x, std::abs(r.r_x));
        worst.r_xi = std::max(worst.r_xi, std::abs(r.r_xi));
        worst_v = std::max(worst_v, std::abs(v));
      }
    }
    write_csv(mt, man.run_dir / "modulation.csv");
    written("modulation.csv");
    mod_json = {{"mode", to_string(cfg.modulation)},
                {"frames", series->frames.size()},
                {"truncated", series->truncated ? nlohmann::json(*series->truncated) : nlohmann::json(nullptr)}};
    if (!series->frames.empty()) mod_json["eps"] = eps_json(eps_statistics(*series));
    if (!residuals.empty())
      mod_json["max_abs_residual"] = {{"r_lambda", worst.r_lambda}, {"r_gamma", worst.r_gamma}, {"r_x", worst.r_x},
                                      {"r_xi", worst.r_xi}, {"virial", worst_v}};
  }

  // final state
  if (!s.fields.empty()) {
    write_field_binary(s.fields.back(), man.run_dir / "final_field.nlsf");
    written("final_field.nlsf");
  }

  // report.json
  struct Check {
    std::string name;
    double value, limit;
  };
  double max_md = 0, max_ed = 0;
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    max_md = std::max(max_md, s.mass_drift[j]);
    max_ed = std::max(max_ed, s.energy_drift[j]);
  }
  std::vector<Check> checks{{"mass_drift", max_md, cfg.solver.conservation_tol},
                            {"energy_drift", max_ed, kEnergyDriftWarn}};
  if (virial_json.is_object()) checks.push_back({"leak_samples", virial_json["leak_samples"].get<double>(), 0.0});
  if (series) checks.push_back({"modulation_truncated", series->truncated ? 1.0 : 0.0, 0.0});
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    const bool ok = c.value <= c.limit;
    (ok ? man.passed : man.warned)++;
    checks_json.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"status", ok ? "pass" : "warn"}});
  }
  if (traj.halted) {
    man.status = "halted";
    man.halted = traj.halted;
  }
  if (failure) {
    man.status = "failed";
    man.halted = *failure;
  }
  man.warned += static_cast<int>(warnings.size());
  man.warnings = warnings;

  nlohmann::json report;
  report["scenario"] = cfg.name;
  report["status"] = man.status;
  report["halted"] = man.halted ? nlohmann::json(*man.halted) : nlohmann::json(nullptr);
  report["accepted_steps"] = traj.accepted_steps;
  report["samples"] = s.t.size();
  report["t_start"] = s.t.empty() ? kNaN : s.t.front();
  report["t_end"] = s.t.empty() ? kNaN : s.t.back();
  report["conservation"] = {{"max_mass_drift", max_md}, {"max_energy_drift", max_ed}};
  report["virial"] = virial_json;
  report["modulation"] = mod_json;
  if (dcfg.truncated_energy && !s.t.empty()) {
    double sup = 0, drift = 0;
    const double e0 = tt.rows.front()[6];
    for (const auto& r : tt.rows) {
      sup = std::max(sup, std::abs(r[6]));
      drift = std::max(drift, std::abs(r[6] - e0));
    }
    report["truncated_energy"] = {{"k", dcfg.truncation_k}, {"sup_abs", sup}, {"drift", drift}};
    if (mod_json.is_object() && mod_json.contains("eps"))
      report["truncated_energy"]["eps_weighted_integral"] = mod_json["eps"]["weighted_integral"];
  }
  report["checks"] = checks_json;
  report["warnings"] = warnings;
  write_text(man.run_dir / "report.json", report.dump(2) + "\n");
  written("report.json");

  write_text(man.run_dir / "plot.py", plot_script());
  written("plot.py");

  man.finished = utc_now(false);
  const fs::path tmp = man.run_dir / "manifest.json.tmp";
  write_text(tmp, man.to_json().dump(2) + "\n");
  fs::rename(tmp, man.run_dir / "manifest.json");
  return man;
}

BatchResult batch(const std::vector<ScenarioConfig>& configs, std::size_t parallelism, const RunOptions& opt) {
  if (parallelism == 0) throw InputError("batch parallelism must be at least 1");
  std::vector<std::optional<RunManifest>> done(configs.size());
  std::vector<std::optional<std::string>> errors(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
      try {
        done[i] = run_scenario(configs[i], opt);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(parallelism, configs.size());
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  if (workers > 0) worker();
  for (auto& t : pool) t.join();

  BatchResult r;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (done[i]) r.manifests.push_back(std::move(*done[i]));
    if (errors[i]) r.failures.emplace_back(configs[i].name, *errors[i]);
  }
  return r;
}

std::string summarize_run(const fs::path& run_dir) {
  const RunManifest m = read_manifest(run_dir);
  for (const auto& f : m.output_files)
    if (!fs::exists(run_dir / f)) throw FormatError("manifest lists missing file " + f);
  std::ifstream is(run_dir / "report.json");
  const auto rep = nlohmann::json::parse(is);
  std::ostringstream os;
  os << "run        " << run_dir.string() << "\n";
  os << "scenario   " << m.scenario.value("name", "?") << " (" << m.scenario["initial"].value("kind", "?") << ")\n";
  os << "status     " << m.status << (m.halted ? " (" + *m.halted + ")" : "") << "\n";
  os << "window     t = " << rep["t_start"].dump() << " .. " << rep["t_end"].dump() << ", "
     << rep["accepted_steps"].dump() << " steps, " << rep["samples"].dump() << " samples\n";
  os << "drift      mass " << rep["conservation"]["max_mass_drift"].dump() << ", energy "
     << rep["conservation"]["max_energy_drift"].dump() << "\n";
  if (rep["modulation"].is_object() && rep["modulation"].contains("eps"))
    os << "eps_l2     max " << rep["modulation"]["eps"]["max"].dump() << ", mean " << rep["modulation"]["eps"]["mean"].dump()
       << "\n";
  if (rep["modulation"].is_object() && rep["modulation"].contains("max_abs_residual"))
    os << "residuals  " << rep["modulation"]["max_abs_residual"].dump() << "\n";
  os << "checks     " << m.passed << " pass, " << m.warned << " warn\n";
  for (const auto& c : rep["checks"])
    if (c["status"] == "warn") os << "warn       " << c["name"].get<std::string>() << " = " << c["value"].dump() << " (limit " << c["limit"].dump() << ")\n";
  for (const auto& w : m.warnings) os << "warning    " << w << "\n";
  return os.str();
}

std::string plot_script() {
  return R"py(#!/usr/bin/env python3
# Plots the CSV series of this run directory. Usage: python3 plot.py [--save]
import csv
import os
import sys

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def load(name):
    path = os.path.join(here, name)
    if not os.path.exists(path):
        return None
    with open(path) as f:
        rows = [r for r in f if not r.startswith("#")]
    reader = csv.DictReader(rows)
    cols = {k: [] for k in reader.fieldnames}
    for r in reader:
        for k, v in r.items():
            cols[k].append(float(v) if v else float("nan"))
    return cols


traj = load("trajectory.csv")
mod = load("modulation.csv")
vir = load("virial.csv")

fig, ax = plt.subplots(2, 2, figsize=(11, 7))
ax[0][0].semilogy(traj["t"], [max(v, 1e-17) for v in traj["mass_drift"]], label="mass drift")
ax[0][0].semilogy(traj["t"], [max(v, 1e-17) for v in traj["energy_drift"]], label="energy drift")
ax[0][0].legend()
ax[0][0].set_xlabel("t")
ax[0][1].plot(traj["t"], traj["variance"], label="variance")
ax[0][1].plot(traj["t"], traj["morawetz"], label="Morawetz M(t)")
ax[0][1].legend()
ax[0][1].set_xlabel("t")
if mod:
    ax[1][0].plot(mod["t"], mod["lambda"], label="lambda")
    ax[1][0].plot(mod["t"], mod["x0"], label="x0")
    ax[1][0].plot(mod["t"], mod["xi"], label="xi")
    ax[1][0].legend()
    ax[1][0].set_xlabel("t")
    ax[1][1].semilogy(mod["t"], [max(v, 1e-17) for v in mod["eps_l2"]], label="||eps||")
    ax[1][1].legend()
    ax[1][1].set_xlabel("t")
elif vir:
    ax[1][0].plot(vir["t"], vir["d2v_dt2"], label="d2V/dt2")
    ax[1][0].plot(vir["t"], vir["energy16"], "--", label="16 E")
    ax[1][0].legend()
fig.tight_layout()
if "--save" in sys.argv:
    fig.savefig(os.path.join(here, "plot.png"), dpi=120)
else:
    plt.show()
)py";
}

}  // namespace nlslab
