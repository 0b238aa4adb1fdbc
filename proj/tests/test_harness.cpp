#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "nlslab/config.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/identities.hpp"
#include "nlslab/symmetries.hpp"
#include "oracles.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("nlslab-test-" + std::to_string(::getpid())) / tag;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool has(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

double column_max(const CsvTable& t, const std::string& name) {
  double m = 0.0;
  for (double v : t.values(name))
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  return m;
}

// small, fast run used by the determinism and atomicity cases
ScenarioConfig quick(const std::string& name, std::uint64_t seed) {
  ScenarioConfig c;
  c.name = name;
  c.grid = {32.0, 1024};
  c.t_final = 0.2;
  c.initial.kind = InitialKind::PerturbedSoliton;
  c.initial.noise_amplitude = 1e-3;
  c.rng_seed = seed;
  return c;
}

std::vector<std::string> csv_files(const RunManifest& m) {
  std::vector<std::string> out;
  for (const auto& f : m.output_files)
    if (fs::path(f).extension() == ".csv") out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("config: toml and json describe the same scenario") {
  const std::string toml = R"(
name = "boosted"
t_final = 0.5
rng_seed = 7
modulation = "symmetric2"

[grid]
half_length = 32.0
n = 1024

[initial]
kind = "soliton"
lambda = 1.5
xi = 0.25

[solver]
dt_init = 2e-3
output_every = 5

[diagnostics]
enabled = ["mass", "energy", "variance"]
morawetz_R = 6.0
)";
  const auto c = parse_toml_config(toml);
  CHECK(c.name == "boosted");
  CHECK(c.t_final == 0.5);
  CHECK(c.rng_seed == 7);
  CHECK(c.modulation == ModulationSetting::Symmetric2);
  CHECK(c.grid.n == 1024);
  CHECK(c.initial.lambda == 1.5);
  CHECK(c.initial.xi == 0.25);
  CHECK(c.solver.dt_init == 2e-3);
  CHECK(c.solver.output_every == 5);
  CHECK(c.diagnostics.mass);
  CHECK_FALSE(c.diagnostics.morawetz);
  CHECK(c.diagnostics.morawetz_config.R == 6.0);
  CHECK(c.violations().empty());

  const auto back = parse_json_config(to_json(c).dump());
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("config: every violation is reported with its key") {
  SUBCASE("negative dt") {
    ScenarioConfig c;
    c.solver.dt_init = -1e-3;
    CHECK(has(c.violations(), "solver.dt_init"));
    try {
      c.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(has(e.violations(), "solver.dt_init"));
      CHECK(std::string(e.what()).find("solver.dt_init") != std::string::npos);
    }
  }
  SUBCASE("several at once") {
    ScenarioConfig c;
    c.solver.dt_init = 0.0;
    c.t_final = 0.0;
    c.grid.n = 0;
    const auto v = c.violations();
    CHECK(has(v, "solver.dt_init"));
    CHECK(has(v, "t_final"));
    CHECK(has(v, "grid.n"));
  }
  SUBCASE("unknown keys and wrong types are violations") {
    const std::string toml = R"(
name = "x"
colour = "red"
[grid]
n = "many"
)";
    try {
      parse_toml_config(toml);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(has(e.violations(), "colour"));
      CHECK(has(e.violations(), "grid.n"));
    }
  }
  SUBCASE("soliton too wide for the box") {
    ScenarioConfig c;
    c.initial.lambda = 4.0;
    CHECK_FALSE(c.violations().empty());
  }
  SUBCASE("pseudoconformal start must precede blowup") {
    ScenarioConfig c;
    c.initial.kind = InitialKind::Pseudoconformal;
    c.initial.blowup_time = 0.0;
    c.initial.t0 = 0.5;
    CHECK(has(c.violations(), "initial.t0"));
  }
  SUBCASE("malformed text") { CHECK_THROWS_AS(parse_toml_config("name = = 3"), ConfigError); }
}

TEST_CASE("config: load_config dispatches on extension") {
  const auto dir = scratch("config");
  {
    std::ofstream(dir / "a.toml") << "name = \"a\"\n[grid]\nn = 1024\n";
    std::ofstream(dir / "b.json") << R"({"name": "b", "grid": {"n": 1024}})";
  }
  CHECK(load_config(dir / "a.toml").grid.n == 1024);
  CHECK(load_config(dir / "b.json").name == "b");
  CHECK_THROWS_AS(load_config(dir / "missing.toml"), InputError);
}

TEST_CASE("csv: round trip and version check") {
  const auto dir = scratch("csv");
  CsvTable t;
  t.kind = "trajectory";
  t.metadata = {"grid half_length=32 n=1024"};
  t.columns = {"t", "a", "b"};
  t.rows = {{0.0, 1.0 / 3.0, std::nan("")}, {0.1, -2.5e-17, 4.0}};
  write_csv(t, dir / "t.csv");

  const auto r = read_csv(dir / "t.csv", "trajectory");
  CHECK(r.columns == t.columns);
  CHECK(r.metadata == t.metadata);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0][1] == 1.0 / 3.0);
  CHECK(std::isnan(r.rows[0][2]));
  CHECK(r.rows[1][1] == -2.5e-17);
  CHECK(r.values("b")[1] == 4.0);
  CHECK_THROWS_AS(r.column("nope"), FormatError);

  CHECK_THROWS_AS(read_csv(dir / "t.csv", "modulation"), FormatError);
  t.version = 2;
  write_csv(t, dir / "v2.csv");
  CHECK_THROWS_AS(read_csv(dir / "v2.csv", "trajectory"), FormatError);
  CHECK_THROWS_AS(read_csv(dir / "absent.csv", "trajectory"), FormatError);
}

TEST_CASE("field files: binary and csv round trip") {
  const auto dir = scratch("fields");
  const auto g = Grid::make(16.0, 256);
  const Field u = soliton(0.3, 1.2, 0.4, 0.5, 0.7, g);

  write_field_binary(u, dir / "u.nlsf");
  write_field_csv(u, dir / "u.csv");
  for (const auto& p : {dir / "u.nlsf", dir / "u.csv"}) {
    const Field r = read_field(p);
    CHECK(r.size() == u.size());
    CHECK(r.grid().half_length() == 16.0);
    double err = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) err = std::max(err, std::abs(r[j] - u[j]));
    CHECK(err == 0.0);
  }

  SUBCASE("documented byte layout") {
    const std::string b = slurp(dir / "u.nlsf");
    CHECK(b.size() == 24 + 16 * 256);
    CHECK(b.substr(0, 4) == "NLSF");
  }
  SUBCASE("unknown version") {
    std::string b = slurp(dir / "u.nlsf");
    b[4] = 9;
    std::ofstream(dir / "bad.nlsf", std::ios::binary) << b;
    CHECK_THROWS_AS(read_field(dir / "bad.nlsf"), FormatError);
  }
  SUBCASE("truncated payload") {
    const std::string b = slurp(dir / "u.nlsf");
    std::ofstream(dir / "short.nlsf", std::ios::binary) << b.substr(0, b.size() - 8);
    CHECK_THROWS_AS(read_field(dir / "short.nlsf"), FormatError);
  }
  SUBCASE("garbage") {
    std::ofstream(dir / "junk.csv") << "hello\n";
    CHECK_THROWS_AS(read_field(dir / "junk.csv"), FormatError);
  }
}

TEST_CASE("run_scenario: exact soliton") {
  RunOptions o;
  o.output_root = scratch("soliton");
  ScenarioConfig c;
  c.name = "soliton";
  const auto m = run_scenario(c, o);
  CHECK(m.status == "complete");
  CHECK(fs::exists(m.run_dir / "manifest.json"));
  for (const auto& f : m.output_files) CHECK(fs::exists(m.run_dir / f));

  const auto mod = read_csv(m.run_dir / "modulation.csv", "modulation");
  CHECK(column_max(mod, "eps_l2") <= 1e-6);
  const auto traj = read_csv(m.run_dir / "trajectory.csv", "trajectory");
  CHECK(column_max(traj, "mass_drift") <= 1e-10);
  CHECK(std::abs(mod.values("lambda").back() - 1.0) <= 1e-6);

  const auto back = read_manifest(m.run_dir);
  CHECK(back.scenario == m.scenario);
  CHECK(back.output_files == m.output_files);
  CHECK(summarize_run(m.run_dir).find("soliton") != std::string::npos);
}

TEST_CASE("run_scenario: perturbed soliton residuals") {
  RunOptions o;
  o.output_root = scratch("perturbed");
  ScenarioConfig c;
  c.name = "perturbed";
  c.initial.kind = InitialKind::PerturbedSoliton;
  c.initial.noise_amplitude = 1e-3;
  c.rng_seed = 5;
  const auto m = run_scenario(c, o);
  const auto mod = read_csv(m.run_dir / "modulation.csv", "modulation");
  for (const char* col : {"r_lambda", "r_gamma", "r_x", "r_xi"}) {
    CAPTURE(col);
    CHECK(column_max(mod, col) <= 1e-4);
  }
  CHECK(column_max(mod, "eps_l2") <= 2e-3);
}

TEST_CASE("run_scenario: rejects configs the grid cannot resolve") {
  RunOptions o;
  o.output_root = scratch("unresolved");
  ScenarioConfig c;
  c.grid = {32.0, 128};
  CHECK_THROWS_AS(run_scenario(c, o), ConfigError);
  CHECK(fs::is_empty(o.output_root));
}

TEST_CASE("run_scenario: file initial data") {
  const auto dir = scratch("fileinit");
  const auto g = Grid::make(32.0, 1024);
  write_field_binary(soliton(0.0, 1.0, 0.0, 0.0, 0.0, g), dir / "q.nlsf");
  ScenarioConfig c;
  c.name = "fromfile";
  c.grid = {32.0, 1024};
  c.t_final = 0.1;
  c.initial.kind = InitialKind::File;
  c.initial.path = (dir / "q.nlsf").string();
  RunOptions o;
  o.output_root = dir / "runs";
  const auto m = run_scenario(c, o);
  CHECK(column_max(read_csv(m.run_dir / "modulation.csv", "modulation"), "eps_l2") <= 1e-6);
}

TEST_CASE("determinism: fixed seed gives byte-identical csv") {
  RunOptions o;
  o.output_root = scratch("determinism");
  const auto a = run_scenario(quick("d", 11), o);
  const auto b = run_scenario(quick("d", 11), o);
  CHECK(a.run_dir != b.run_dir);
  for (const auto& f : csv_files(a)) {
    CAPTURE(f);
    CHECK(slurp(a.run_dir / f) == slurp(b.run_dir / f));
  }
  CHECK(slurp(a.run_dir / "final_field.nlsf") == slurp(b.run_dir / "final_field.nlsf"));
}

TEST_CASE("batch: scheduling does not change outputs") {
  std::vector<ScenarioConfig> cfgs{quick("b0", 1), quick("b1", 2), quick("b2", 3), quick("b3", 4)};
  RunOptions o1, o4;
  o1.output_root = scratch("batch1");
  o4.output_root = scratch("batch4");
  const auto r1 = batch(cfgs, 1, o1);
  const auto r4 = batch(cfgs, 4, o4);
  REQUIRE(r1.manifests.size() == 4);
  REQUIRE(r4.manifests.size() == 4);
  CHECK(r1.failures.empty());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r4.manifests[i].scenario["name"] == cfgs[i].name);
    for (const auto& f : csv_files(r1.manifests[i]))
      CHECK(slurp(r1.manifests[i].run_dir / f) == slurp(r4.manifests[i].run_dir / f));
  }
  // different seeds, different noise
  CHECK(slurp(r1.manifests[0].run_dir / "trajectory.csv") != slurp(r1.manifests[1].run_dir / "trajectory.csv"));
}

TEST_CASE("batch: failures are isolated") {
  RunOptions o;
  o.output_root = scratch("batchfail");
  auto bad = quick("bad", 1);
  bad.solver.dt_init = -1.0;
  const auto r = batch({quick("good", 1), bad}, 2, o);
  CHECK(r.manifests.size() == 1);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].first == "bad");
  CHECK(r.failures[0].second.find("solver.dt_init") != std::string::npos);

  const auto empty = batch({}, 4, o);
  CHECK(empty.manifests.empty());
  CHECK(empty.failures.empty());
}

TEST_CASE("manifest is written last") {
  const auto root = scratch("atomic");

  SUBCASE("exception between writes") {
    RunOptions o;
    o.output_root = root;
    o.after_write = [](const std::string& f) {
      if (f == "modulation.csv") throw std::runtime_error("interrupted");
    };
    CHECK_THROWS(run_scenario(quick("x", 1), o));
  }
  SUBCASE("process killed between writes") {
    const pid_t pid = ::fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      RunOptions o;
      o.output_root = root;
      o.after_write = [](const std::string& f) {
        if (f == "report.json") ::_exit(0);
      };
      try {
        run_scenario(quick("x", 1), o);
      } catch (...) {
      }
      ::_exit(1);
    }
    int st = 0;
    ::waitpid(pid, &st, 0);
    REQUIRE(WIFEXITED(st));
    CHECK(WEXITSTATUS(st) == 0);
  }

  int dirs = 0;
  for (const auto& e : fs::directory_iterator(root)) {
    ++dirs;
    CHECK(fs::exists(e.path() / "trajectory.csv"));
    CHECK_FALSE(fs::exists(e.path() / "manifest.json"));
    CHECK_THROWS_AS(read_manifest(e.path()), FormatError);
  }
  CHECK(dirs == 1);
}

TEST_CASE("identity suite") {
  SUBCASE("default grids pass") {
    const auto rep = check_identities();
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() >= 34);
    const auto j = rep.to_json();
    CHECK(j["all_pass"] == true);
    for (const auto& c : j["checks"]) {
      CHECK(c.contains("measured"));
      CHECK(c.contains("tolerance"));
      const auto tag = c["oracle"].get<std::string>();
      CHECK((tag == "closed_form" || tag == "exact_identity"));
    }
    for (const auto& c : rep.checks)
      if (c.name == "mass_sq") CHECK(std::abs(c.measured - oracle::quad_mass_sq()) <= 1e-8 * c.measured);
  }
  SUBCASE("coarse grid is a negative control") {
    const auto rep = check_identities({Grid::make(32.0, 64)});
    CHECK_FALSE(rep.all_pass());
    int degraded = 0;
    for (const auto& c : rep.checks) {
      if (c.name == "ground_state_ode_residual") CHECK(c.status == IdentityStatus::Fail);
      else CHECK(c.status != IdentityStatus::Fail);
      degraded += c.status == IdentityStatus::Degraded;
    }
    CHECK(degraded > 0);
  }
}
