#include "nlslab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace nlslab {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid scenario config:";
  for (const auto& m : v) s += "\n  " + m;
  return s;
}

// Reads a JSON object into typed fields, collecting type errors and unknown keys.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(where("") + "expected a table");
  }

  ~Reader() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) errors_.push_back(where(k) + "unknown key");
  }

  const nlohmann::json* find(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object()) return nullptr;
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (auto* v = find(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        errors_.push_back(where(key) + "expected a number");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (auto* v = find(key)) {
      if (v->is_number_integer() && (std::is_signed_v<Int> || v->get<long long>() >= 0))
        out = v->get<Int>();
      else
        errors_.push_back(where(key) + (std::is_signed_v<Int> ? "expected an integer" : "expected a nonnegative integer"));
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto* v = find(key)) {
      if (v->is_boolean())
        out = v->get<bool>();
      else
        errors_.push_back(where(key) + "expected true or false");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (auto* v = find(key)) {
      if (v->is_string())
        out = v->get<std::string>();
      else
        errors_.push_back(where(key) + "expected a string");
    }
  }

  std::string where(const std::string& key) const {
    std::string p = prefix_.empty() ? key : (key.empty() ? prefix_ : prefix_ + "." + key);
    return p.empty() ? "" : p + ": ";
  }

 private:
  const nlohmann::json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

const nlohmann::json kEmpty = nlohmann::json::object();

const nlohmann::json& section(Reader& r, const std::string& key) {
  const auto* v = r.find(key);
  return v ? *v : kEmpty;
}

InitialKind parse_kind(const std::string& s, std::vector<std::string>& errors) {
  if (s == "soliton") return InitialKind::Soliton;
  if (s == "pseudoconformal") return InitialKind::Pseudoconformal;
  if (s == "perturbed_soliton") return InitialKind::PerturbedSoliton;
  if (s == "file") return InitialKind::File;
  errors.push_back("initial.kind: expected soliton, pseudoconformal, perturbed_soliton or file, got '" + s + "'");
  return InitialKind::Soliton;
}

ModulationSetting parse_modulation(const std::string& s, std::vector<std::string>& errors) {
  if (s == "off") return ModulationSetting::Off;
  if (s == "symmetric2") return ModulationSetting::Symmetric2;
  if (s == "full4") return ModulationSetting::Full4;
  errors.push_back("modulation: expected off, symmetric2 or full4, got '" + s + "'");
  return ModulationSetting::Off;
}

const char* const kDiagnosticNames[] = {"mass", "energy", "gn_ratio", "variance", "morawetz", "truncated_energy"};

bool* diagnostic_flag(DiagnosticsSpec& d, const std::string& name) {
  if (name == "mass") return &d.mass;
  if (name == "energy") return &d.energy;
  if (name == "gn_ratio") return &d.gn_ratio;
  if (name == "variance") return &d.variance;
  if (name == "morawetz") return &d.morawetz;
  if (name == "truncated_energy") return &d.truncated_energy;
  return nullptr;
}

ScenarioConfig from_json(const nlohmann::json& j) {
  std::vector<std::string> errors;
  ScenarioConfig c;
  {
    Reader top(j, "", errors);
    top.string("name", c.name);
    top.number("t_final", c.t_final);
    top.integer("rng_seed", c.rng_seed);
    std::string mod = to_string(c.modulation);
    top.string("modulation", mod);
    c.modulation = parse_modulation(mod, errors);

    {
      Reader g(section(top, "grid"), "grid", errors);
      g.number("half_length", c.grid.half_length);
      g.integer("n", c.grid.n);
    }
    {
      Reader in(section(top, "initial"), "initial", errors);
      std::string kind = to_string(c.initial.kind);
      in.string("kind", kind);
      c.initial.kind = parse_kind(kind, errors);
      in.number("lambda", c.initial.lambda);
      in.number("theta", c.initial.theta);
      in.number("x0", c.initial.x0);
      in.number("xi", c.initial.xi);
      in.number("blowup_time", c.initial.blowup_time);
      in.number("t0", c.initial.t0);
      in.number("noise_amplitude", c.initial.noise_amplitude);
      in.boolean("admissible", c.initial.admissible);
      in.boolean("even", c.initial.even);
      in.boolean("mass_renormalize", c.initial.mass_renormalize);
      in.string("path", c.initial.path);
    }
    {
      Reader s(section(top, "solver"), "solver", errors);
      s.number("dt_init", c.solver.dt_init);
      s.number("dt_safety", c.solver.dt_safety);
      s.boolean("adaptive", c.solver.adaptive);
      s.boolean("dealias", c.solver.dealias);
      s.integer("max_steps", c.solver.max_steps);
      s.number("blowup_grad_threshold", c.solver.blowup_grad_threshold);
      s.number("blowup_lambda_floor", c.solver.blowup_lambda_floor);
      s.number("conservation_tol", c.solver.conservation_tol);
      s.integer("output_every", c.solver.output_every);
      s.boolean("nonlinear", c.solver.nonlinear);
    }
    {
      Reader d(section(top, "diagnostics"), "diagnostics", errors);
      if (const auto* en = d.find("enabled")) {
        if (!en->is_array()) {
          errors.push_back("diagnostics.enabled: expected a list of names");
        } else {
          for (const char* n : kDiagnosticNames) *diagnostic_flag(c.diagnostics, n) = false;
          for (const auto& item : *en) {
            bool* flag = item.is_string() ? diagnostic_flag(c.diagnostics, item.get<std::string>()) : nullptr;
            if (flag)
              *flag = true;
            else
              errors.push_back("diagnostics.enabled: unknown diagnostic " + item.dump());
          }
        }
      }
      d.integer("truncation_k", c.diagnostics.truncation_k);
      d.number("morawetz_R", c.diagnostics.morawetz_config.R);
      d.number("morawetz_eta1", c.diagnostics.morawetz_config.eta1);
      d.integer("morawetz_k", c.diagnostics.morawetz_config.cutoff_level);
    }
  }
  for (auto& v : c.violations()) errors.push_back(std::move(v));
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

bool power_of_two(std::size_t n) { return n >= 16 && (n & (n - 1)) == 0; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : InputError(join(violations)), violations_(std::move(violations)) {}

SolverConfig ScenarioConfig::default_scenario_solver() {
  SolverConfig s;
  s.output_every = 20;
  return s;
}

double ScenarioConfig::start_time() const {
  return initial.kind == InitialKind::Pseudoconformal ? initial.t0 : 0.0;
}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v;
  if (name.empty() || name.find_first_of("/\\ \t") != std::string::npos)
    v.push_back("name: must be nonempty without slashes or spaces");
  if (!(grid.half_length > 0.0) || !std::isfinite(grid.half_length)) v.push_back("grid.half_length: must be positive");
  if (!power_of_two(grid.n)) v.push_back("grid.n: must be a power of two >= 16");
  if (!std::isfinite(t_final) || t_final == 0.0) v.push_back("t_final: must be finite and nonzero");
  for (const auto& s : solver.violations()) v.push_back("solver." + s);

  const auto& in = initial;
  if (!(in.lambda > 0.0)) v.push_back("initial.lambda: must be positive");
  for (auto [key, val] : {std::pair{"theta", in.theta}, {"x0", in.x0}, {"xi", in.xi}})
    if (!std::isfinite(val)) v.push_back(std::string("initial.") + key + ": must be finite");

  const double h = 2.0 * grid.half_length / static_cast<double>(std::max<std::size_t>(grid.n, 1));
  const double nyquist = std::numbers::pi / h;
  // Q(y) < 5e-9 for |y| >= 20
  constexpr double kReach = 20.0;
  if (grid.half_length > 0 && grid.n > 0 && in.lambda > 0) switch (in.kind) {
      case InitialKind::Soliton:
      case InitialKind::PerturbedSoliton: {
        const double center = std::abs(in.x0) / in.lambda;
        const double travel = t_final > 0 ? 2.0 * std::abs(in.xi) * t_final : 0.0;
        if (center + travel + kReach / in.lambda > grid.half_length)
          v.push_back("initial: soliton (with its travel over t_final) does not fit in the box");
        if (in.lambda * h > 0.25) v.push_back("initial.lambda: soliton width 1/lambda is under-resolved by grid.n");
        if (std::abs(in.xi) + 10.0 * in.lambda > nyquist / 3.0)
          v.push_back("initial.xi: boost frequency is too close to the grid Nyquist frequency");
        if (in.kind == InitialKind::PerturbedSoliton && !(in.noise_amplitude >= 0.0))
          v.push_back("initial.noise_amplitude: must be nonnegative");
        break;
      }
      case InitialKind::Pseudoconformal: {
        const double T = in.blowup_time;
        if (!(in.t0 < T)) v.push_back("initial.t0: must be before initial.blowup_time");
        if (!(in.t0 + t_final < T)) v.push_back("t_final: window must end before initial.blowup_time");
        if (t_final < 0) v.push_back("t_final: pseudoconformal windows run forward");
        if (in.t0 < T) {
          const double w0 = (T - in.t0) / in.lambda;
          if (std::abs(in.xi) + kReach * w0 + std::abs(in.x0) * w0 > grid.half_length)
            v.push_back("initial: pseudoconformal profile at t0 does not fit in the box");
          const double w1 = (T - in.t0 - t_final) / in.lambda;
          if (w1 > 0 && w1 < 4.0 * h) v.push_back("t_final: window end concentrates below the grid spacing");
        }
        break;
      }
      case InitialKind::File:
        if (in.path.empty()) v.push_back("initial.path: required for file initial data");
        break;
    }

  const auto& d = diagnostics;
  if (d.morawetz_config.R < 0.0 || !std::isfinite(d.morawetz_config.R))
    v.push_back("diagnostics.morawetz_R: must be positive (0 selects L/4)");
  if (!(d.morawetz_config.eta1 > 0.0 && d.morawetz_config.eta1 <= 1.0))
    v.push_back("diagnostics.morawetz_eta1: must lie in (0, 1]");
  return v;
}

void ScenarioConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Soliton: return "soliton";
    case InitialKind::Pseudoconformal: return "pseudoconformal";
    case InitialKind::PerturbedSoliton: return "perturbed_soliton";
    case InitialKind::File: return "file";
  }
  return "?";
}

std::string to_string(ModulationSetting m) {
  switch (m) {
    case ModulationSetting::Off: return "off";
    case ModulationSetting::Symmetric2: return "symmetric2";
    case ModulationSetting::Full4: return "full4";
  }
  return "?";
}

nlohmann::json to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["t_final"] = c.t_final;
  j["rng_seed"] = c.rng_seed;
  j["modulation"] = to_string(c.modulation);
  j["grid"] = {{"half_length", c.grid.half_length}, {"n", c.grid.n}};
  const auto& in = c.initial;
  j["initial"] = {{"kind", to_string(in.kind)}, {"lambda", in.lambda}, {"theta", in.theta}, {"x0", in.x0},
                  {"xi", in.xi}, {"blowup_time", in.blowup_time}, {"t0", in.t0},
                  {"noise_amplitude", in.noise_amplitude}, {"admissible", in.admissible}, {"even", in.even},
                  {"mass_renormalize", in.mass_renormalize}, {"path", in.path}};
  const auto& s = c.solver;
  j["solver"] = {{"dt_init", s.dt_init}, {"dt_safety", s.dt_safety}, {"adaptive", s.adaptive}, {"dealias", s.dealias},
                 {"max_steps", s.max_steps}, {"blowup_grad_threshold", s.blowup_grad_threshold},
                 {"blowup_lambda_floor", s.blowup_lambda_floor}, {"conservation_tol", s.conservation_tol},
                 {"output_every", s.output_every}, {"nonlinear", s.nonlinear}};
  auto enabled = nlohmann::json::array();
  DiagnosticsSpec d = c.diagnostics;
  for (const char* n : kDiagnosticNames)
    if (*diagnostic_flag(d, n)) enabled.push_back(n);
  j["diagnostics"] = {{"enabled", enabled},
                      {"truncation_k", d.truncation_k},
                      {"morawetz_R", d.morawetz_config.R},
                      {"morawetz_eta1", d.morawetz_config.eta1},
                      {"morawetz_k", d.morawetz_config.cutoff_level}};
  return j;
}

ScenarioConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("json: ") + e.what()});
  }
  return from_json(j);
}

ScenarioConfig parse_toml_config(const std::string& text) {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "toml: " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError({os.str()});
  }
  std::ostringstream os;
  os << toml::json_formatter{t};
  return from_json(nlohmann::json::parse(os.str()));
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({"config: cannot open " + path.string()});
  std::stringstream ss;
  ss << is.rdbuf();
  ScenarioConfig c = path.extension() == ".json" ? parse_json_config(ss.str()) : parse_toml_config(ss.str());
  if (c.initial.kind == InitialKind::File && std::filesystem::path(c.initial.path).is_relative())
    c.initial.path = (path.parent_path() / c.initial.path).lexically_normal().string();
  return c;
}

}  // namespace nlslab
