#pragma once

#include <string>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/ground_state.hpp"

namespace nlslab {

/// Symmetry coordinates acting as u -> e^{i gamma} e^{i x xi} lambda^{1/2} u(lambda x + x0).
struct ModulationParams {
  double lambda = 1.0;
  double gamma = 0.0;
  double x0 = 0.0;
  double xi = 0.0;

  /// Copy with gamma reduced to [0, 2 pi). Throws DomainError unless lambda > 0.
  ModulationParams canonical() const;
};

/// Smallest distance between two phases on the circle.
double phase_distance(double a, double b);

/// Parameters of apply(outer, apply(inner, .)).
ModulationParams compose(const ModulationParams& outer, const ModulationParams& inner);
/// Group inverse; carries the translation/boost phase cross term.
ModulationParams invert(const ModulationParams& p);

inline constexpr double kMinResampleScale = 0.125;
inline constexpr double kMaxResampleScale = 8.0;

/// e^{i gamma} e^{i x xi} lambda^{1/2} u(lambda x + x0) on u's grid, rescaling by
/// Fourier interpolation. Throws RangeError when lambda leaves [1/8, 8].
Field apply(const ModulationParams& p, const Field& u);

/// apply(p, f) for a closed-form profile f, evaluated pointwise (no interpolation).
Field modulated_profile(const ModulationParams& p, Profile f, const GridPtr& grid);

/// Moving soliton e^{-i theta - i t xi0^2} e^{i lambda^2 t} e^{i x xi0} lambda^{1/2} Q(lambda (x - 2 t xi0) + x0).
Field soliton(double t, double lambda, double theta, double x0, double xi0, const GridPtr& grid);

/// Blowup solution concentrating at time T (DomainError for t >= T):
/// (T-t)^{-1/2} lambda^{1/2} e^{i theta} e^{i (x-xi0)^2 / (4(t-T))} e^{-i lambda^2/(t-T)}
///   Q((lambda (x - xi0) - (T-t) x0) / (T-t)).
Field pseudoconformal_soliton(double t, double T, double lambda, double theta, double x0, double xi0,
                              const GridPtr& grid);

struct ConjugateResult {
  Field field;
  std::vector<std::string> warnings;
};

/// v(x) = |t|^{-1/2} conj(u(x/t)) e^{i x^2 / 4t}, where u is the field at time 1/t.
/// DomainError at t = 0. Warns when |t| < 1 or when u or v carries mass in the
/// outer quarter of the box.
ConjugateResult pseudoconformal_conjugate(const Field& u, double t);

/// Largest |u| over the outer quarter of the box (|x| >= 3L/4).
double edge_magnitude(const Field& u);

}  // namespace nlslab
