#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

struct SolverConfig {
  double dt_init = 2e-4;
  /// Adaptive step: dt = min(dt_init, dt_safety / (1 + ||u||_inf^4)).
  double dt_safety = 6e-4;
  bool adaptive = true;
  /// Smooth 2/3-rule mask after each nonlinear substep.
  bool dealias = true;
  std::size_t max_steps = 10'000'000;
  /// Halt when ||u_x||_2 exceeds this.
  double blowup_grad_threshold = 1e4;
  /// Halt when the amplitude scale proxy (||Q||_inf / ||u||_inf)^2 drops below this.
  double blowup_lambda_floor = 1e-3;
  /// Relative mass drift above this attaches a warning.
  double conservation_tol = 1e-8;
  /// Keep every k-th accepted step (first and last are always kept).
  std::size_t output_every = 1;
  /// Off gives the free Schrodinger flow.
  bool nonlinear = true;

  /// Every violated constraint, one message each; empty when valid.
  std::vector<std::string> violations() const;
  /// Throws InputError listing all violations.
  void validate() const;
};

struct StepResult {
  double t = 0.0;
  Field field;
  /// |M(t) - M(0)| / M(0).
  double mass_drift = 0.0;
  /// |E(t) - E(0)| / max(|E(0)|, ||u0_x||^2 / 2); E(Q) = 0 makes a pure ratio useless.
  double energy_drift = 0.0;
  std::optional<std::string> halted;
};

struct Trajectory {
  std::vector<StepResult> steps;
  std::size_t accepted_steps = 0;
  std::optional<std::string> halted;
  std::vector<std::string> warnings;
};

/// NaN or overflow in the samples; carries the run up to the last good state.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Free propagator: Fourier coefficient k gets e^{-i k^2 dt}.
Field linear_step(const Field& u, double dt);

/// Exact |u|^4 u flow: u e^{i |u|^4 dt}.
Field nonlinear_step(const Field& u, double dt);

/// Amplitude scale proxy (||Q||_inf / ||u||_inf)^2; equals the soliton width
/// for lambda^{-1/2} Q(x / lambda).
double amplitude_scale(const Field& u);

using StepObserver = std::function<void(const StepResult&)>;

/// Strang split-step integration of i u_t + u_xx + |u|^4 u = 0 to t_final
/// (negative t_final integrates backward). Throws NumericalFailure on NaN.
Trajectory evolve(const Field& u0, double t_final, const SolverConfig& cfg, const StepObserver& observer = {});

struct ConvergenceReport {
  /// log2 of successive self-differences; NaN when exact_propagator is set.
  double order = 0.0;
  double coarse_difference = 0.0;
  double fine_difference = 0.0;
  /// Both differences sit at rounding level: the scheme is exact for this data.
  bool exact_propagator = false;
};

/// Fixed-step runs at dt, dt/r, dt/r^2; order = log_r(||u_dt - u_{dt/r}|| / ||u_{dt/r} - u_{dt/r^2}||).
/// refinement must exceed 1 (identical step sizes leave the ratio undefined).
ConvergenceReport convergence_order(const Field& u0, double t_final, double dt, const SolverConfig& cfg,
                                    double refinement = 2.0);

}  // namespace nlslab
