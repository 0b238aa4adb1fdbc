#pragma once

#include "nlslab/field.hpp"

namespace nlslab {

/// Q(x) = (3 / cosh^2(2x))^{1/4}, the positive even solution of Q'' + Q^5 = Q.
double eval_q(double x);

/// Closed-form profiles built from Q, evaluated pointwise so they can be
/// placed in any modulated frame without resampling.
enum class Profile {
  Q,
  Q3,                 // Q^3
  Qx,                 // Q'
  LminusQ3,           // L_- Q^3 = -(Q^3)'' - Q^7 + Q^3
  LminusQx,           // L_- Q' = 4 Q^4 Q'
  Y2Q,                // y^2 Q
  ScalingGenerator,   // Q/2 + y Q'
};

double profile_value(Profile p, double y);
/// d/dy of the profile; defined for Q, Q3 and Qx (InputError otherwise).
double profile_slope(Profile p, double y);

Field sample_profile(Profile p, const GridPtr& grid);

struct GroundStateConstants {
  double mass_sq = 0.0;    // ||Q||_2^2
  double l4_fourth = 0.0;  // ||Q||_4^4
  double l6_sixth = 0.0;   // ||Q||_6^6
  double grad_sq = 0.0;    // ||Q'||_2^2, spectral derivative
  /// |grad_sq - l6_sixth / 3|; zero energy forces this to vanish.
  double relation_defect = 0.0;
};

/// Quadrature values of the four functional constants on the given grid.
GroundStateConstants ground_state_constants(const GridPtr& grid);

/// ||q'' + q^5 - q||_2 with a spectral second derivative.
double ode_residual(const Field& q);
/// ode_residual of the sampled ground state.
double ode_residual(const GridPtr& grid);

}  // namespace nlslab
