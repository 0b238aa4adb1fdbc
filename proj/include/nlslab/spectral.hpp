#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

/// Re of the integral of f times conj(g), rectangle rule on the periodic grid.
double inner_product(const Field& f, const Field& g);

/// Integral of the samples, rectangle rule.
cplx integrate(const Field& f);

/// Spectral derivative of order 1 or 2. Throws InputError for other orders.
Field derivative(const Field& f, int order);

enum class ProjectionKind { LowPass, Band, HighPass };
enum class Sharpness { Sharp, Smooth };

/// Littlewood-Paley style frequency cutoff at dyadic level i (|k| in rad/length).
///
/// Sharp profiles: LowPass keeps |k| <= 2^i, HighPass keeps |k| > 2^i, Band
/// keeps 2^{i-1} < |k| <= 2^i (band 0 is |k| <= 1). Negative levels give the
/// zero operator for LowPass and Band, the identity for HighPass.
/// Smooth profiles taper LowPass with cos^2 over [2^i, 2^{i+1}]; HighPass is
/// the complement and Band the difference of consecutive LowPass profiles.
struct ProjectionSpec {
  ProjectionKind kind = ProjectionKind::LowPass;
  int level = 0;
  Sharpness sharpness = Sharpness::Sharp;
};

/// Fourier multiplier of a projection evaluated at wavenumber k.
double projection_multiplier(const ProjectionSpec& spec, double k);

Field project(const Field& f, const ProjectionSpec& spec);

/// Smooth 2/3-rule mask: 1 below k_nyq/3, cos^2 taper to 0 at 2 k_nyq/3.
double dealias_multiplier(double k, double nyquist);

/// Multiply Fourier coefficients by m(k).
Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// L^p norm for p in {1, 2, 4, 6, 8, inf}; throws InputError otherwise.
double lp_norm(const Field& f, double p);

/// Samples of the trigonometric interpolant of f at y_j = scale * x_j + shift.
/// Points outside [-L, L) evaluate to zero (the box stands in for R).
Field resample(const Field& f, double scale, double shift);

/// Fourier coefficients of f (unnormalized forward DFT).
std::vector<cplx> spectrum(const Field& f);

/// Parseval-weighted spectral energy: sum |c_m|^2 * (2L) / n^2 equals ||f||^2.
double spectral_mass(std::span<const cplx> coefficients, const Grid& grid);

}  // namespace nlslab
