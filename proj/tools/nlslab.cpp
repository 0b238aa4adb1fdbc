#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "nlslab/config.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/evolution.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/identities.hpp"
#include "nlslab/linearized.hpp"
#include "nlslab/modulation.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIdentity = 3 };

int identities(bool json) {
  const auto rep = check_identities();
  if (json) {
    std::cout << rep.to_json().dump(2) << "\n";
  } else {
    for (const auto& c : rep.checks)
      std::printf("%-9s %-28s n=%-5zu measured=%.12g expected=%.12g tol=%.1e%s [%s]\n",
                  to_string(c.status).c_str(), c.name.c_str(), c.n, c.measured, c.expected, c.tolerance,
                  c.relative ? " rel" : "", c.oracle.c_str());
    std::printf("%s\n", rep.all_pass() ? "all identities pass" : "identity suite FAILED");
  }
  return rep.all_pass() ? kOk : kIdentity;
}

int manifest_exit(const RunManifest& m) { return m.status == "failed" ? kNumerical : kOk; }

int simulate(const fs::path& path) {
  const auto cfg = load_config(path);
  const auto m = run_scenario(cfg);
  std::cout << summarize_run(m.run_dir);
  return manifest_exit(m);
}

int fit(const fs::path& path, bool json) {
  const Field u = read_field(path);
  const auto seed = seed_from_field(u);
  const auto r = decompose(u, ModulationMode::Full4, seed);
  const auto p = r.params.canonical();
  if (json) {
    nlohmann::json j{{"lambda", p.lambda}, {"gamma", p.gamma}, {"x0", p.x0}, {"xi", p.xi},
                     {"eps_l2", r.eps_l2}, {"orthogonality", r.ortho_residuals},
                     {"newton_iters", r.newton_iters}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("lambda  %.15g\ngamma   %.15g\nx0      %.15g\nxi      %.15g\neps_l2  %.6e\n", p.lambda, p.gamma, p.x0,
                p.xi, r.eps_l2);
    std::printf("ortho   %.2e %.2e %.2e %.2e (%d Newton steps)\n", r.ortho_residuals[0], r.ortho_residuals[1],
                r.ortho_residuals[2], r.ortho_residuals[3], r.newton_iters);
  }
  return kOk;
}

int spectrum(const std::string& which, double half_length, std::size_t n, int count) {
  const auto op = which == "L" ? LinearizedOperator::LPlus : LinearizedOperator::LMinus;
  const auto sp = low_spectrum(assemble(op, Grid::make(half_length, n)), count);
  for (std::size_t i = 0; i < sp.size(); ++i) std::printf("%zu %.12g\n", i, sp[i].value);
  return kOk;
}

int run_batch(const fs::path& dir, std::size_t jobs) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".toml" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  int code = kOk;
  std::vector<ScenarioConfig> cfgs;
  for (const auto& f : files) {
    try {
      cfgs.push_back(load_config(f));
    } catch (const InputError& e) {
      std::cerr << f.string() << ": " << e.what() << "\n";
      code = kValidation;
    }
  }
  const auto r = batch(cfgs, jobs);
  for (const auto& m : r.manifests) {
    std::printf("%-8s %s\n", m.status.c_str(), m.run_dir.c_str());
    if (manifest_exit(m) != kOk) code = std::max(code, int(kNumerical));
  }
  for (const auto& [name, msg] : r.failures) {
    std::printf("error    %s: %s\n", name.c_str(), msg.c_str());
    code = std::max(code, int(kNumerical));
  }
  std::printf("%zu runs, %zu failed\n", r.manifests.size(), r.failures.size());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the 1D focusing quintic NLS near the soliton.\n"
               "Run output goes under $" + std::string(kOutputRootEnv) + " (default ./" + kDefaultOutputRoot + ")."};
  app.require_subcommand(1);

  bool json = false;
  auto* ci = app.add_subcommand("check-identities", "static identity suite at two resolutions");
  ci->add_flag("--json", json, "print the report as JSON");

  std::string config;
  auto* sim = app.add_subcommand("simulate", "run one scenario config (TOML or JSON)");
  sim->add_option("config", config)->required()->check(CLI::ExistingFile);

  std::string field;
  bool fit_json = false;
  auto* ft = app.add_subcommand("fit", "modulation fit of a field file");
  ft->add_option("field-file", field)->required()->check(CLI::ExistingFile);
  ft->add_flag("--json", fit_json);

  std::string which;
  double half_length = 32.0;
  std::size_t n = 512;
  int count = 5;
  auto* sp = app.add_subcommand("spectrum", "lowest eigenvalues of L or Lminus");
  sp->add_option("operator", which)->required()->check(CLI::IsMember({"L", "Lminus"}));
  sp->add_option("--half-length", half_length, "box is [-L, L)")->capture_default_str();
  sp->add_option("--n", n, "grid points")->capture_default_str()->check(CLI::Range(8, 4096));
  sp->add_option("--count", count)->capture_default_str()->check(CLI::Range(1, 10));

  std::string dir;
  std::size_t jobs = 1;
  auto* bt = app.add_subcommand("batch", "run every *.toml / *.json config in a directory");
  bt->add_option("dir", dir)->required();
  bt->add_option("-j,--jobs", jobs)->capture_default_str()->check(CLI::PositiveNumber);

  std::string run_dir;
  auto* rp = app.add_subcommand("report", "summarize a finished run directory");
  rp->add_option("run-dir", run_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*ci) return identities(json);
    if (*sim) return simulate(config);
    if (*ft) return fit(field, fit_json);
    if (*sp) return spectrum(which, half_length, n, count);
    if (*bt) return run_batch(dir, jobs);
    if (*rp) {
      std::cout << summarize_run(run_dir);
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kValidation;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
