#include "nlslab/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlslab/errors.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symmetries.hpp"

namespace nlslab {

namespace {

Field smooth_low(const Field& u, int level) {
  return project(u, {ProjectionKind::LowPass, level, Sharpness::Smooth});
}

// 3-point nonuniform second derivative; the end points reuse their neighbour's stencil.
std::vector<double> second_derivative(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t c = std::clamp<std::size_t>(j, 1, n - 2);
    const double hm = x[c] - x[c - 1], hp = x[c + 1] - x[c];
    out[j] = 2.0 * ((f[c + 1] - f[c]) / hp - (f[c] - f[c - 1]) / hm) / (hm + hp);
  }
  return out;
}

// Gauss-Legendre, 6 nodes: exact for psi^2 (degree 10) on each taper piece.
double taper_sq_integral(TaperProfile p, double a, double b) {
  static constexpr std::array<double, 6> node{-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                              0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static constexpr std::array<double, 6> weight{0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                                0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double s = 0.5 * (a + b) + 0.5 * (b - a) * node[i];
    const double v = taper(p, s);
    acc += weight[i] * v * v;
  }
  return 0.5 * (b - a) * acc;
}

}  // namespace

double taper(TaperProfile, double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double t = a - 1.0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

MorawetzConfig MorawetzConfig::for_grid(const Grid& g) {
  MorawetzConfig c;
  c.R = g.half_length() / 4.0;
  return c;
}

void MorawetzConfig::validate() const {
  if (!(R > 0.0)) throw InputError("MorawetzConfig.R must be positive");
  if (!(eta1 > 0.0 && eta1 <= 1.0)) throw InputError("MorawetzConfig.eta1 must lie in (0, 1]");
}

double morawetz_weight(const MorawetzConfig& cfg, double x) {
  const double scale = cfg.R / cfg.eta1;
  const double a = std::abs(x) / scale;
  double v = std::min(a, 1.0);
  if (a > 1.0) v += taper_sq_integral(cfg.psi, 1.0, std::min(a, 2.0));
  return std::copysign(scale * v, x);
}

double morawetz_potential(const Field& u, const MorawetzConfig& cfg) {
  cfg.validate();
  const Field p = smooth_low(u, cfg.cutoff_level + 9);
  const Field px = derivative(p, 1);
  const Grid& g = u.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) acc += morawetz_weight(cfg, g.x(j)) * (std::conj(p[j]) * px[j]).imag();
  return acc * g.spacing();
}

double variance(const Field& u) {
  const Grid& g = u.grid();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += g.x(j) * g.x(j) * std::norm(u[j]);
  return acc * g.spacing();
}

double variance_rate(const Field& u) {
  const Grid& g = u.grid();
  const Field ux = derivative(u, 1);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += g.x(j) * (std::conj(u[j]) * ux[j]).imag();
  return 4.0 * acc * g.spacing();
}

std::vector<VirialPoint> variance_and_virial(const std::vector<double>& times, const std::vector<Field>& fields) {
  if (times.size() != fields.size()) throw InputError("variance_and_virial: times and fields differ in length");
  if (times.size() < 3) throw InputError("variance_and_virial needs at least three samples");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1])) throw InputError("variance_and_virial: times must increase strictly");

  std::vector<double> v(times.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = variance(fields[j]);
  const auto dv = nonuniform_derivative(times, v);
  const auto d2v = second_derivative(times, v);

  std::vector<VirialPoint> out(times.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    auto& p = out[j];
    p.t = times[j];
    p.variance = v[j];
    p.dv_dt = dv[j];
    p.d2v_dt2 = d2v[j];
    p.rate = variance_rate(fields[j]);
    p.energy16 = 16.0 * energy(fields[j]);
    p.first_residual = std::abs(p.dv_dt - p.rate);
    p.second_residual = std::abs(p.d2v_dt2 - p.energy16);
    p.leak = edge_magnitude(fields[j]) > kLeakThreshold;
  }
  return out;
}

std::vector<VirialPoint> variance_and_virial(const Trajectory& traj) {
  std::vector<double> t;
  std::vector<Field> f;
  for (const auto& s : traj.steps) {
    // the clipped final step can repeat a recorded time
    if (!t.empty() && s.t <= t.back()) continue;
    t.push_back(s.t);
    f.push_back(s.field);
  }
  return variance_and_virial(t, f);
}

double truncated_energy(const Field& u, int k) { return energy(smooth_low(u, k + 9)); }

TruncatedEnergyReport truncated_energy_drift(const Trajectory& traj, int k, const ModulationSeries* series) {
  TruncatedEnergyReport r;
  r.k = k;
  for (const auto& s : traj.steps) {
    r.t.push_back(s.t);
    r.energy.push_back(truncated_energy(s.field, k));
  }
  for (double e : r.energy) {
    r.sup_abs = std::max(r.sup_abs, std::abs(e));
    r.drift = std::max(r.drift, std::abs(e - r.energy.front()));
  }
  if (series && !series->frames.empty()) {
    const auto st = eps_statistics(*series);
    r.eps_integral = st.weighted_integral;
    double acc = 0.0;
    for (const auto& f : series->frames) acc += f.eps_l2 * f.eps_l2;
    r.eps_sq_mean = acc / static_cast<double>(series->frames.size());
  }
  return r;
}

double bilinear_interaction(const Field& u, int i) {
  if (i < 3) throw InputError("bilinear_interaction needs i >= 3");
  const Field low = smooth_low(u, i - 3);
  const Field high = u - smooth_low(u, i - 1);
  return std::exp2(0.5 * i) * std::sqrt(mass(high * low));
}

DiagnosticSample sample_diagnostics(double t, const Field& u, const MorawetzConfig& cfg, int k,
                                    std::optional<double> eps_l2) {
  DiagnosticSample s;
  s.t = t;
  s.mass = mass(u);
  s.energy = energy(u);
  try {
    s.gn_ratio = gn_ratio(u);
  } catch (const DomainError&) {
    s.gn_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  s.variance = variance(u);
  s.morawetz = morawetz_potential(u, cfg);
  s.truncated_energy = truncated_energy(u, k);
  s.eps_l2 = eps_l2;
  return s;
}

EpsStatistics eps_statistics(const ModulationSeries& series) {
  const auto& fr = series.frames;
  if (fr.empty()) throw InputError("eps_statistics needs a nonempty series");
  EpsStatistics st;
  st.frames = fr.size();
  double sum = 0.0, sq = 0.0;
  for (std::size_t j = 0; j < fr.size(); ++j) {
    const double e = fr[j].eps_l2;
    st.max = std::max(st.max, e);
    sum += e;
    sq += e * e;
    if (j > 0) {
      const auto& a = fr[j - 1];
      const auto& b = fr[j];
      const double wa = a.eps_l2 * a.eps_l2 / (a.params.lambda * a.params.lambda);
      const double wb = b.eps_l2 * b.eps_l2 / (b.params.lambda * b.params.lambda);
      st.weighted_integral += 0.5 * (wa + wb) * (b.t - a.t);
      st.s_integral += 0.5 * (a.eps_l2 * a.eps_l2 + b.eps_l2 * b.eps_l2) * (b.s - a.s);
    }
  }
  const double n = static_cast<double>(fr.size());
  st.mean = sum / n;
  st.rms = std::sqrt(sq / n);
  st.last = fr.back().eps_l2;
  return st;
}

}  // namespace nlslab
