#include "nlslab/functionals.hpp"

#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

double mass(const Field& u) { return inner_product(u, u); }

double gradient_sq(const Field& u) {
  const Grid& g = u.grid();
  const auto c = spectrum(u);
  const auto k = g.wavenumbers();
  const std::size_t nyq = g.size() / 2;
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (j != nyq) acc += k[j] * k[j] * std::norm(c[j]);
  const double n = static_cast<double>(g.size());
  return acc * 2.0 * g.half_length() / (n * n);
}

double energy(const Field& u) { return 0.5 * gradient_sq(u) - std::pow(lp_norm(u, 6.0), 6.0) / 6.0; }

double gn_ratio(const Field& u, double q_mass_sq) {
  const double m = mass(u) / q_mass_sq;
  const double denom = 3.0 * m * m * gradient_sq(u);
  if (!(denom > 0.0)) throw DomainError("gn_ratio needs a nonzero, nonconstant field");
  return std::pow(lp_norm(u, 6.0), 6.0) / denom;
}

double gn_ratio(const Field& u) {
  return gn_ratio(u, ground_state_constants(u.grid_ptr()).mass_sq);
}

}  // namespace nlslab
