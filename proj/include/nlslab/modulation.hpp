#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/field.hpp"
#include "nlslab/symmetries.hpp"

namespace nlslab {

/// symmetric2 fits (lambda, gamma) against (eps, Q^3) = (eps, iQ^3) = 0 with x0, xi
/// held at the seed; full4 adds (eps, Q_x) = (eps, iQ_x) = 0.
enum class ModulationMode { Symmetric2, Full4 };

/// Decomposition u = apply(invert(params), Q + eps), i.e.
/// e^{i gamma} e^{i y xi} lambda^{1/2} u(lambda y + x0) = Q(y) + eps(y).
/// lambda is the width of the bump in u and x0 its center.
struct DecompositionResult {
  ModulationParams params;
  /// eps in the Q frame, present when materialized.
  std::optional<Field> epsilon;
  /// u - apply(invert(params), Q); same L2 norm as eps.
  Field eps_u_frame;
  /// (eps, Q^3), (eps, iQ^3), (eps, Q_x), (eps, iQ_x); symmetric2 fills only the first two.
  /// Evaluated on `epsilon` itself when it is materialized.
  std::array<double, 4> ortho_residuals{};
  double eps_l2 = 0.0;
  int newton_iters = 0;
};

struct DecomposeOptions {
  double tolerance = 1e-11;
  int max_iters = 50;
  /// Resample eps into the Q frame and re-evaluate the orthogonality on it.
  bool materialize = true;
};

/// Damped Newton on the orthogonality map with the analytic Jacobian of the
/// pulled-back profiles. Throws BasinError without convergence and
/// DomainError when a Newton step drives lambda to zero or below.
DecompositionResult decompose(const Field& u, ModulationMode mode, const ModulationParams& seed,
                              const DecomposeOptions& opt = {});

/// Starting point from the field alone: lambda by a 2^{j/4} grid search on the
/// overlap with Q, x0 at the |u|^2 centroid, xi from the mean Fourier
/// frequency, gamma from the overlap phase.
ModulationParams seed_from_field(const Field& u);

/// Derivative of the residual map at identity for u = Q. Rows follow the
/// residual order (Q^3, iQ^3, Q_x, iQ_x), columns (lambda, gamma, x0, xi);
/// symmetric2 returns the leading 2x2 block.
std::vector<std::vector<double>> jacobian_at_identity(ModulationMode mode, const GridPtr& grid);

/// Residual map F(p) = ((eps, Q^3), (eps, iQ^3), (eps, Q_x), (eps, iQ_x)) with
/// eps = apply(p, u) - Q, and its analytic Jacobian in (lambda, gamma, x0, xi).
struct OrthogonalitySystem {
  std::array<double, 4> residual{};
  std::array<std::array<double, 4>, 4> jacobian{};
};
OrthogonalitySystem orthogonality_system(const Field& u, const ModulationParams& p);

/// Pulled-back inner products: (eps, h) and (eps_2, h) for a closed-form real profile h,
/// where eps = apply(p, u) - Q, computed without resampling u.
struct ProfileOverlap {
  double real_part = 0.0;  // (eps, h) = (eps_1, h)
  double imag_part = 0.0;  // (eps, i h) = (eps_2, h)
};
ProfileOverlap epsilon_overlap(const Field& u, const ModulationParams& p, Profile h);

struct ModulationFrame {
  double t = 0.0;
  double s = 0.0;
  /// gamma is unwrapped along the series, not reduced mod 2 pi.
  ModulationParams params;
  double eps_l2 = 0.0;
  int newton_iters = 0;
  double eps2_lminus_q3 = 0.0;  // (eps_2, L_- Q^3)
  double eps2_lminus_qx = 0.0;  // (eps_2, L_- Q_x)
  double eps_y2q = 0.0;         // (eps, y^2 Q)
  double eps2_generator = 0.0;  // (eps_2, Q/2 + y Q_y)
};

/// Ground-state constants the residual laws need, measured on the tracked grid.
struct ModulationConstants {
  double mass_sq = 0.0;
  double l4_fourth = 0.0;
  double grad_sq = 0.0;
  double y2q_sq = 0.0;  // ||y Q||^2
};

struct ModulationSeries {
  ModulationMode mode = ModulationMode::Full4;
  ModulationConstants constants;
  std::vector<ModulationFrame> frames;
  /// Set when a frame left the decomposition basin; frames stop before it.
  std::optional<std::string> truncated;
};

ModulationConstants modulation_constants(const GridPtr& grid);

/// Decompose each frame, chaining seeds by linear extrapolation. s is the
/// cumulative trapezoid of lambda^{-2} dt from the first frame.
ModulationSeries track(const std::vector<double>& times, const std::vector<Field>& fields, ModulationMode mode,
                       std::optional<ModulationParams> first_seed = std::nullopt);
ModulationSeries track(const Trajectory& trajectory, ModulationMode mode,
                       std::optional<ModulationParams> first_seed = std::nullopt);

/// Leading-order modulation laws, each O(||eps||^2) plus the O(ds^2) floor of the differences:
///   r_lambda = (|Q|_4^4/4) lambda_s/lambda + (eps_2, L_- Q^3)
///   r_gamma  = |Q|_4^4 (gamma_s + 1 - (x_s/lambda) xi - xi^2)
///   r_x      = (x_s/lambda + 2 xi) |Q_x|^2 + (eps_2, L_- Q_x)
///   r_xi     = (xi_s - (lambda_s/lambda) xi) |Q|^2/2
struct ModulationResiduals {
  double r_lambda = 0.0;
  double r_gamma = 0.0;
  double r_x = 0.0;
  double r_xi = 0.0;
};

/// Throws InputError with fewer than 3 frames.
std::vector<ModulationResiduals> ode_residuals(const ModulationSeries& series);

/// d/ds (eps, y^2 Q) + (lambda_s/lambda) |yQ|^2 + 4 (eps_2, Q/2 + y Q_y), per frame.
std::vector<double> virial_in_s(const ModulationSeries& series);

/// Second-order derivative of samples f over a nonuniform abscissa: centered
/// three-point stencil inside, one-sided three-point at the ends.
std::vector<double> nonuniform_derivative(const std::vector<double>& x, const std::vector<double>& f);

}  // namespace nlslab
