#include "nlslab/symmetries.hpp"

#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSupportTol = 1e-12;

double wrap_phase(double g) {
  double r = std::fmod(g, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

ModulationParams ModulationParams::canonical() const {
  if (!(lambda > 0.0)) throw DomainError("modulation scale must be positive");
  ModulationParams p = *this;
  p.gamma = wrap_phase(gamma);
  return p;
}

double phase_distance(double a, double b) {
  const double d = wrap_phase(a - b);
  return std::min(d, kTwoPi - d);
}

ModulationParams compose(const ModulationParams& outer, const ModulationParams& inner) {
  ModulationParams p;
  p.lambda = inner.lambda * outer.lambda;
  p.gamma = wrap_phase(inner.gamma + outer.gamma + outer.x0 * inner.xi);
  p.x0 = inner.lambda * outer.x0 + inner.x0;
  p.xi = outer.xi + outer.lambda * inner.xi;
  return p;
}

ModulationParams invert(const ModulationParams& p) {
  if (!(p.lambda > 0.0)) throw DomainError("modulation scale must be positive");
  ModulationParams q;
  q.lambda = 1.0 / p.lambda;
  q.x0 = -p.x0 / p.lambda;
  q.xi = -p.xi / p.lambda;
  q.gamma = wrap_phase(-p.gamma + p.x0 * p.xi / p.lambda);
  return q;
}

Field apply(const ModulationParams& p, const Field& u) {
  if (!(p.lambda > 0.0)) throw DomainError("modulation scale must be positive");
  if (p.lambda < kMinResampleScale || p.lambda > kMaxResampleScale)
    throw RangeError("scale outside the resampling window [1/8, 8]; re-grid first");
  Field out = resample(u, p.lambda, p.x0);
  if (p.gamma == 0.0 && p.xi == 0.0 && p.lambda == 1.0) return out;
  const double amp = std::sqrt(p.lambda);
  const Grid& g = u.grid();
  auto v = out.values();
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= amp * std::polar(1.0, p.gamma + g.x(j) * p.xi);
  return out;
}

Field modulated_profile(const ModulationParams& p, Profile f, const GridPtr& grid) {
  if (!(p.lambda > 0.0)) throw DomainError("modulation scale must be positive");
  const double amp = std::sqrt(p.lambda);
  return Field::from_function(grid, [&](double x) {
    return amp * std::polar(1.0, p.gamma + x * p.xi) * profile_value(f, p.lambda * x + p.x0);
  });
}

Field soliton(double t, double lambda, double theta, double x0, double xi0, const GridPtr& grid) {
  if (!(lambda > 0.0)) throw DomainError("soliton scale must be positive");
  const double amp = std::sqrt(lambda);
  const double base = -theta - t * xi0 * xi0 + lambda * lambda * t;
  return Field::from_function(grid, [&](double x) {
    return amp * std::polar(1.0, base + x * xi0) * eval_q(lambda * (x - 2.0 * t * xi0) + x0);
  });
}

Field pseudoconformal_soliton(double t, double T, double lambda, double theta, double x0, double xi0,
                              const GridPtr& grid) {
  if (!(t < T)) throw DomainError("pseudoconformal soliton requires t < T");
  if (!(lambda > 0.0)) throw DomainError("soliton scale must be positive");
  const double tau = T - t;
  const double amp = std::sqrt(lambda / tau);
  return Field::from_function(grid, [&](double x) {
    const double d = x - xi0;
    const double phase = theta - d * d / (4.0 * tau) + lambda * lambda / tau;
    return amp * std::polar(1.0, phase) * eval_q((lambda * d - tau * x0) / tau);
  });
}

double edge_magnitude(const Field& u) {
  const Grid& g = u.grid();
  const double edge = 0.75 * g.half_length();
  double m = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(g.x(j)) >= edge) m = std::max(m, std::abs(u[j]));
  return m;
}

ConjugateResult pseudoconformal_conjugate(const Field& u, double t) {
  if (t == 0.0) throw DomainError("pseudoconformal conjugation is singular at t = 0");
  ConjugateResult r{resample(u, 1.0 / t, 0.0), {}};
  if (std::abs(t) < 1.0) r.warnings.emplace_back("|t| < 1: x/t may leave the box");
  if (edge_magnitude(u) > kSupportTol) r.warnings.emplace_back("input is not negligible in the outer quarter of the box");
  const double amp = 1.0 / std::sqrt(std::abs(t));
  const Grid& g = u.grid();
  auto v = r.field.values();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = g.x(j);
    v[j] = amp * std::conj(v[j]) * std::polar(1.0, x * x / (4.0 * t));
  }
  if (edge_magnitude(r.field) > kSupportTol)
    r.warnings.emplace_back("output is not negligible in the outer quarter of the box");
  return r;
}

}  // namespace nlslab
