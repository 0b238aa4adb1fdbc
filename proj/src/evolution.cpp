#include "nlslab/evolution.hpp"

#include <cmath>
#include <limits>

#include "nlslab/errors.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

std::vector<std::string> SolverConfig::violations() const {
  std::vector<std::string> v;
  if (!(dt_init > 0.0)) v.emplace_back("dt_init must be positive");
  if (!(dt_safety > 0.0)) v.emplace_back("dt_safety must be positive");
  if (max_steps == 0) v.emplace_back("max_steps must be positive");
  if (!(blowup_grad_threshold > 0.0)) v.emplace_back("blowup_grad_threshold must be positive");
  if (!(blowup_lambda_floor > 0.0)) v.emplace_back("blowup_lambda_floor must be positive");
  if (!(conservation_tol > 0.0)) v.emplace_back("conservation_tol must be positive");
  if (output_every == 0) v.emplace_back("output_every must be positive");
  return v;
}

void SolverConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid solver config:";
  for (const auto& s : v) msg += " " + s + ";";
  throw InputError(msg);
}

Field linear_step(const Field& u, double dt) {
  if (dt == 0.0) return u;
  return apply_multiplier(u, [dt](double k) { return std::polar(1.0, -k * k * dt); });
}

Field nonlinear_step(const Field& u, double dt) {
  Field out = u;
  if (dt == 0.0) return out;
  for (auto& z : out.values()) {
    const double m2 = std::norm(z);
    z *= std::polar(1.0, m2 * m2 * dt);
  }
  return out;
}

double amplitude_scale(const Field& u) {
  const double m = lp_norm(u, kInfinityNorm);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  const double r = eval_q(0.0) / m;
  return r * r;
}

namespace {

// Reusable buffers for one Strang step: half linear, nonlinear, half linear.
class Stepper {
 public:
  Stepper(const GridPtr& grid, const SolverConfig& cfg) : grid_(grid), cfg_(cfg), coeff_(grid->size()) {}

  void step(Field& u, double dt) {
    const auto k = grid_->wavenumbers();
    const double nyq = grid_->nyquist();
    grid_->forward(u.values(), coeff_);
    for (std::size_t j = 0; j < coeff_.size(); ++j) coeff_[j] *= std::polar(1.0, -0.5 * k[j] * k[j] * dt);
    grid_->inverse(coeff_, u.values());
    const bool mask = cfg_.nonlinear && cfg_.dealias;
    if (cfg_.nonlinear) {
      for (auto& z : u.values()) {
        const double m2 = std::norm(z);
        z *= std::polar(1.0, m2 * m2 * dt);
      }
    }
    grid_->forward(u.values(), coeff_);
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
      cplx m = std::polar(1.0, -0.5 * k[j] * k[j] * dt);
      if (mask) m *= dealias_multiplier(k[j], nyq);
      coeff_[j] *= m;
    }
    grid_->inverse(coeff_, u.values());
  }

 private:
  GridPtr grid_;
  const SolverConfig& cfg_;
  std::vector<cplx> coeff_;
};

struct Monitor {
  double m0;
  double e0;
  double escale;

  explicit Monitor(const Field& u0) : m0(mass(u0)), e0(energy(u0)) {
    escale = std::max(std::abs(e0), 0.5 * gradient_sq(u0));
    if (escale == 0.0) escale = 1.0;
  }

  StepResult record(double t, const Field& u) const {
    StepResult r{t, u, 0.0, 0.0, std::nullopt};
    r.mass_drift = m0 > 0.0 ? std::abs(mass(u) - m0) / m0 : 0.0;
    r.energy_drift = std::abs(energy(u) - e0) / escale;
    return r;
  }
};

void keep(Trajectory& tr, StepResult r, const StepObserver& obs) {
  if (obs) obs(r);
  tr.steps.push_back(std::move(r));
}

}  // namespace

Trajectory evolve(const Field& u0, double t_final, const SolverConfig& cfg, const StepObserver& observer) {
  cfg.validate();
  if (!u0.is_finite()) throw InputError("initial data contains NaN or Inf");
  const Monitor mon(u0);
  Trajectory tr;
  keep(tr, mon.record(0.0, u0), observer);

  const double dir = t_final < 0.0 ? -1.0 : 1.0;
  const double horizon = std::abs(t_final);
  Stepper stepper(u0.grid_ptr(), cfg);
  Field u = u0;
  double t = 0.0;  // elapsed |time|
  double max_mass_drift = 0.0;
  bool last_kept = true;

  while (t < horizon) {
    if (tr.accepted_steps >= cfg.max_steps) {
      tr.halted = "max_steps reached";
      break;
    }
    double dt = cfg.dt_init;
    if (cfg.adaptive) {
      const double m = lp_norm(u, kInfinityNorm);
      dt = std::min(dt, cfg.dt_safety / (1.0 + m * m * m * m));
    }
    // clip the last step; absorb a sliver rather than take a tiny extra step
    if (t + dt >= horizon || horizon - (t + dt) < 1e-12 * horizon) dt = horizon - t;
    Field prev = u;
    stepper.step(u, dir * dt);
    if (!u.is_finite()) {
      if (!last_kept) keep(tr, mon.record(dir * t, prev), {});
      throw NumericalFailure("non-finite samples at t = " + std::to_string(dir * (t + dt)), std::move(tr));
    }
    t = (t + dt >= horizon) ? horizon : t + dt;
    ++tr.accepted_steps;

    std::optional<std::string> halt;
    if (std::sqrt(gradient_sq(u)) > cfg.blowup_grad_threshold)
      halt = "gradient norm exceeded blowup_grad_threshold";
    else if (cfg.nonlinear && amplitude_scale(u) < cfg.blowup_lambda_floor)
      halt = "amplitude scale fell below blowup_lambda_floor";

    const bool done = t >= horizon || halt.has_value();
    if (done || tr.accepted_steps % cfg.output_every == 0) {
      StepResult r = mon.record(dir * t, u);
      r.halted = halt;
      max_mass_drift = std::max(max_mass_drift, r.mass_drift);
      keep(tr, std::move(r), observer);
      last_kept = true;
    } else {
      last_kept = false;
    }
    if (halt) {
      tr.halted = halt;
      break;
    }
  }
  if (max_mass_drift > cfg.conservation_tol)
    tr.warnings.push_back("mass drift " + std::to_string(max_mass_drift) + " exceeds conservation_tol");
  return tr;
}

ConvergenceReport convergence_order(const Field& u0, double t_final, double dt, const SolverConfig& cfg,
                                    double refinement) {
  if (!(refinement > 1.0)) throw InputError("convergence_order needs distinct step sizes (refinement > 1)");
  if (!(dt > 0.0)) throw InputError("convergence_order needs dt > 0");
  if (t_final == 0.0) throw InputError("convergence_order needs a nonzero horizon");

  auto run = [&](double h) {
    SolverConfig c = cfg;
    c.adaptive = false;
    const double steps = std::max(1.0, std::round(std::abs(t_final) / h));
    c.dt_init = std::abs(t_final) / steps;
    c.max_steps = static_cast<std::size_t>(steps) + 1;
    c.output_every = c.max_steps;
    c.blowup_grad_threshold = std::numeric_limits<double>::max();
    c.blowup_lambda_floor = std::numeric_limits<double>::min();
    c.conservation_tol = std::numeric_limits<double>::max();
    return evolve(u0, t_final, c).steps.back().field;
  };
  const Field a = run(dt);
  const Field b = run(dt / refinement);
  const Field c = run(dt / (refinement * refinement));
  ConvergenceReport r;
  r.coarse_difference = lp_norm(a - b, 2.0);
  r.fine_difference = lp_norm(b - c, 2.0);
  const double floor = 1e-13 * std::max(1.0, lp_norm(u0, 2.0));
  if (r.coarse_difference <= floor && r.fine_difference <= floor) {
    r.exact_propagator = true;
    r.order = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.order = std::log(r.coarse_difference / r.fine_difference) / std::log(refinement);
  return r;
}

}  // namespace nlslab
