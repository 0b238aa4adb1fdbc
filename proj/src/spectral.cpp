#include "nlslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"

namespace nlslab {

double inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  const auto a = f.values();
  const auto b = g.values();
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    acc += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
  return acc * f.grid().spacing();
}

cplx integrate(const Field& f) {
  cplx acc = 0.0;
  for (const auto& v : f.values()) acc += v;
  return acc * f.grid().spacing();
}

std::vector<cplx> spectrum(const Field& f) {
  std::vector<cplx> c(f.size());
  f.grid().forward(f.values(), c);
  return c;
}

double spectral_mass(std::span<const cplx> coefficients, const Grid& grid) {
  double acc = 0.0;
  for (const auto& c : coefficients) acc += std::norm(c);
  const double n = static_cast<double>(grid.size());
  return acc * 2.0 * grid.half_length() / (n * n);
}

Field apply_multiplier(const Field& f, const std::function<cplx(double)>& m) {
  const Grid& grid = f.grid();
  auto c = spectrum(f);
  const auto k = grid.wavenumbers();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= m(k[j]);
  Field out(f.grid_ptr());
  grid.inverse(c, out.values());
  return out;
}

Field derivative(const Field& f, int order) {
  if (order != 1 && order != 2) throw InputError("derivative order must be 1 or 2");
  const Grid& grid = f.grid();
  auto c = spectrum(f);
  const auto k = grid.wavenumbers();
  const std::size_t nyq = grid.size() / 2;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (order == 1)
      c[j] *= j == nyq ? cplx(0.0) : cplx(0.0, k[j]);
    else
      c[j] *= -k[j] * k[j];
  }
  Field out(f.grid_ptr());
  grid.inverse(c, out.values());
  return out;
}

namespace {

double smooth_low(int level, double k) {
  if (level < 0) return 0.0;
  const double edge = std::ldexp(1.0, level);
  const double a = std::abs(k);
  if (a <= edge) return 1.0;
  if (a >= 2.0 * edge) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (a / edge - 1.0));
  return c * c;
}

double sharp_low(int level, double k) {
  if (level < 0) return 0.0;
  return std::abs(k) <= std::ldexp(1.0, level) ? 1.0 : 0.0;
}

}  // namespace

double projection_multiplier(const ProjectionSpec& spec, double k) {
  const auto low = spec.sharpness == Sharpness::Sharp ? sharp_low : smooth_low;
  switch (spec.kind) {
    case ProjectionKind::LowPass:
      return low(spec.level, k);
    case ProjectionKind::HighPass:
      return 1.0 - low(spec.level, k);
    case ProjectionKind::Band:
      return low(spec.level, k) - low(spec.level - 1, k);
  }
  return 0.0;
}

Field project(const Field& f, const ProjectionSpec& spec) {
  return apply_multiplier(f, [&](double k) { return cplx(projection_multiplier(spec, k)); });
}

double dealias_multiplier(double k, double nyquist) {
  const double a = std::abs(k);
  const double lo = nyquist / 3.0;
  const double hi = 2.0 * nyquist / 3.0;
  if (a <= lo) return 1.0;
  if (a >= hi) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (a - lo) / (hi - lo));
  return c * c;
}

double lp_norm(const Field& f, double p) {
  const auto v = f.values();
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  if (p != 1.0 && p != 2.0 && p != 4.0 && p != 6.0 && p != 8.0)
    throw InputError("lp_norm exponent must be one of 1, 2, 4, 6, 8, inf");
  double acc = 0.0;
  if (p == 1.0) {
    for (const auto& z : v) acc += std::abs(z);
    return acc * f.grid().spacing();
  }
  const int half = static_cast<int>(p) / 2;
  for (const auto& z : v) {
    const double m2 = std::norm(z);
    double t = m2;
    for (int i = 1; i < half; ++i) t *= m2;
    acc += t;
  }
  return std::pow(acc * f.grid().spacing(), 1.0 / p);
}

Field resample(const Field& f, double scale, double shift) {
  const Grid& grid = f.grid();
  if (scale == 1.0 && shift == 0.0) return f;
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  const auto c = spectrum(f);

  // Nonnegative modes 0..n/2 and negative modes 1..n/2, Nyquist split evenly;
  // two Horner sums keep the low modes free of accumulated phase error.
  std::vector<cplx> pos(half + 1), neg(half + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < half; ++m) pos[m] = c[m] * inv_n;
  for (std::size_t m = 1; m < half; ++m) neg[m] = c[n - m] * inv_n;
  pos[half] = 0.5 * c[half] * inv_n;
  neg[half] = pos[half];

  const double left = -grid.half_length();
  const double right = grid.half_length();
  Field out(f.grid_ptr());
  auto dst = out.values();
  for (std::size_t j = 0; j < n; ++j) {
    const double y = scale * grid.x(j) + shift;
    if (y < left || y >= right) {
      dst[j] = 0.0;
      continue;
    }
    const double theta = grid.dk() * (y - left);
    const cplx z(std::cos(theta), std::sin(theta));
    const cplx zc = std::conj(z);
    cplx up = pos[half];
    for (std::size_t m = half; m-- > 0;) up = up * z + pos[m];
    cplx down = neg[half];
    for (std::size_t m = half; m-- > 1;) down = down * zc + neg[m];
    dst[j] = up + down * zc;
  }
  return out;
}

}  // namespace nlslab
