#include "nlslab/noise.hpp"

#include <cmath>
#include <random>

#include "nlslab/errors.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

Field project_admissible(const Field& eps) {
  const auto g = eps.grid_ptr();
  const cplx i1(0.0, 1.0);
  const Field q3 = sample_profile(Profile::Q3, g);
  const Field qx = sample_profile(Profile::Qx, g);
  Field out = eps;
  for (const Field& d : {q3, q3 * i1, qx, qx * i1}) out -= d * cplx(inner_product(out, d) / inner_product(d, d));
  return out;
}

Field even_part(const Field& eps) {
  const std::size_t n = eps.size();
  Field out(eps.grid_ptr());
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.5 * (eps[j] + eps[(n - j) % n]);
  return out;
}

Field renormalize_mass(const Field& eps) {
  const auto g = eps.grid_ptr();
  const Field q = sample_profile(Profile::Q, g);
  const Field dir = project_admissible(q);
  const Field base = q + eps;
  const double a = inner_product(dir, dir);
  const double b = 2.0 * inner_product(base, dir);
  const double c = inner_product(base, base) - inner_product(q, q);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw DomainError("mass renormalization has no real solution");
  // smaller root in magnitude, written to avoid cancellation
  const double root = -2.0 * c / (b + std::copysign(std::sqrt(disc), b));
  return eps + dir * cplx(root);
}

Field band_limited_noise(const GridPtr& grid, double amplitude, std::uint64_t seed, const NoiseOptions& opt) {
  if (!(amplitude >= 0.0)) throw InputError("noise amplitude must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const auto k = grid->wavenumbers();
  std::vector<cplx> c(grid->size());
  // draw for every mode in index order so the stream does not depend on the cutoff
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double re = n01(rng), im = n01(rng);
    if (std::abs(k[j]) <= opt.cutoff) c[j] = cplx(re, im);
  }
  Field f(grid);
  grid->inverse(c, f.values());
  const double w2 = 2.0 * opt.envelope_width * opt.envelope_width;
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= std::exp(-grid->x(j) * grid->x(j) / w2);
  if (opt.even) f = even_part(f);
  if (opt.admissible) f = project_admissible(f);
  const double nrm = lp_norm(f, 2.0);
  if (nrm == 0.0) return f;
  f *= cplx(amplitude / nrm);
  if (opt.mass_renormalize) f = renormalize_mass(f);
  return f;
}

}  // namespace nlslab
