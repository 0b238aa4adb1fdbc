#pragma once

#include <cstdint>

#include "nlslab/field.hpp"

namespace nlslab {

struct NoiseOptions {
  /// Fourier modes with |k| <= cutoff get independent complex Gaussian weights.
  double cutoff = 4.0;
  /// Gaussian envelope e^{-x^2 / (2 w^2)} keeps the noise away from the box edge.
  double envelope_width = 2.0;
  /// Remove the components along Q^3, iQ^3, Q_x, iQ_x.
  bool admissible = false;
  /// Keep only the even part in x.
  bool even = false;
  /// After everything else, shift along the admissible part of Q so that ||Q + eps|| = ||Q||.
  bool mass_renormalize = false;
};

/// Band-limited random perturbation with ||eps||_2 = amplitude (before any mass
/// renormalization). Deterministic in (grid, amplitude, seed, options).
Field band_limited_noise(const GridPtr& grid, double amplitude, std::uint64_t seed, const NoiseOptions& opt = {});

/// Remove the components along Q^3, iQ^3, Q_x, iQ_x (mutually orthogonal directions).
Field project_admissible(const Field& eps);

/// Even part (eps(x) + eps(-x)) / 2, with x_j mirrored to x_{n-j}.
Field even_part(const Field& eps);

/// eps + beta P(Q) with P the admissible projection and beta the smaller root of
/// ||Q + eps + beta P(Q)||^2 = ||Q||^2. Throws DomainError when no real root exists.
Field renormalize_mass(const Field& eps);

}  // namespace nlslab
