#include "nlslab/modulation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pullback of a real profile f by p: g(y) = e^{-i gamma} e^{-i xi z} lambda^{-1/2} f(z),
// z = (y - x0)/lambda, so that (apply(p, u), f) = (u, g). The sums below are
// integral of u conj(.) for g and its parameter derivatives.
struct PulledBack {
  cplx value;    // int u conj(g)
  cplx d_lambda;
  cplx d_gamma;
  cplx d_x0;
  cplx d_xi;
};

PulledBack pull_back(const Field& u, const ModulationParams& p, Profile f, bool with_derivatives) {
  const Grid& g = u.grid();
  const double inv_lam = 1.0 / p.lambda;
  const double amp = 1.0 / std::sqrt(p.lambda);
  const cplx iu(0.0, 1.0);
  cplx v = 0.0, dl = 0.0, dx = 0.0, dxi = 0.0;
  const auto uv = u.values();
  for (std::size_t j = 0; j < uv.size(); ++j) {
    const double z = (g.x(j) - p.x0) * inv_lam;
    const double fz = profile_value(f, z);
    // conj of the base phase e^{-i gamma - i xi z}
    const cplx w = uv[j] * std::polar(amp, p.gamma + p.xi * z);
    v += w * fz;
    if (with_derivatives) {
      const double fp = profile_slope(f, z);
      dxi += w * z * fz;
      // conj(i xi f - f') = -i xi f - f'
      dx += w * cplx(-fp, -p.xi * fz);
      // conj(-f/2 + i xi z f - z f') = -f/2 - z f' - i xi z f
      dl += w * cplx(-0.5 * fz - z * fp, -p.xi * z * fz);
    }
  }
  const double h = g.spacing();
  PulledBack r{};
  r.value = v * h;
  if (with_derivatives) {
    r.d_gamma = iu * r.value;
    r.d_xi = iu * dxi * h;
    r.d_x0 = dx * h * inv_lam;
    r.d_lambda = dl * h * inv_lam;
  }
  return r;
}

struct Reference {
  double q_q3;  // (Q, Q^3) on the grid
  double q_qx;  // (Q, Q_x) on the grid
};

Reference reference(const GridPtr& grid) {
  const Field q = sample_profile(Profile::Q, grid);
  return {inner_product(q, sample_profile(Profile::Q3, grid)), inner_product(q, sample_profile(Profile::Qx, grid))};
}

int dimension(ModulationMode m) { return m == ModulationMode::Full4 ? 4 : 2; }

struct System {
  Eigen::Vector4d residual;
  Eigen::Matrix4d jacobian;
};

System evaluate(const Field& u, const ModulationParams& p, ModulationMode mode, const Reference& ref,
                bool with_derivatives) {
  System s;
  s.residual.setZero();
  s.jacobian.setZero();
  const PulledBack a = pull_back(u, p, Profile::Q3, with_derivatives);
  s.residual(0) = a.value.real() - ref.q_q3;
  s.residual(1) = a.value.imag();
  auto fill = [&](int row, const PulledBack& b) {
    const std::array<cplx, 4> d{b.d_lambda, b.d_gamma, b.d_x0, b.d_xi};
    for (int c = 0; c < 4; ++c) {
      s.jacobian(row, c) = d[c].real();
      s.jacobian(row + 1, c) = d[c].imag();
    }
  };
  if (with_derivatives) fill(0, a);
  if (mode == ModulationMode::Full4) {
    const PulledBack b = pull_back(u, p, Profile::Qx, with_derivatives);
    s.residual(2) = b.value.real() - ref.q_qx;
    s.residual(3) = b.value.imag();
    if (with_derivatives) fill(2, b);
  }
  return s;
}

double max_abs(const Eigen::Vector4d& r, int dim) { return r.head(dim).cwiseAbs().maxCoeff(); }

ModulationParams shifted(const ModulationParams& p, const Eigen::Vector4d& d, double step, int dim) {
  ModulationParams q = p;
  q.lambda += step * d(0);
  q.gamma += step * d(1);
  if (dim == 4) {
    q.x0 += step * d(2);
    q.xi += step * d(3);
  }
  return q;
}

double wrap(double g) {
  double r = std::fmod(g, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

}  // namespace

OrthogonalitySystem orthogonality_system(const Field& u, const ModulationParams& p) {
  const System s = evaluate(u, p, ModulationMode::Full4, reference(u.grid_ptr()), true);
  OrthogonalitySystem out;
  for (int i = 0; i < 4; ++i) {
    out.residual[i] = s.residual(i);
    for (int j = 0; j < 4; ++j) out.jacobian[i][j] = s.jacobian(i, j);
  }
  return out;
}

ProfileOverlap epsilon_overlap(const Field& u, const ModulationParams& p, Profile h) {
  const PulledBack b = pull_back(u, p, h, false);
  const double qh = inner_product(sample_profile(Profile::Q, u.grid_ptr()), sample_profile(h, u.grid_ptr()));
  return {b.value.real() - qh, b.value.imag()};
}

DecompositionResult decompose(const Field& u, ModulationMode mode, const ModulationParams& seed,
                              const DecomposeOptions& opt) {
  if (!(seed.lambda > 0.0)) throw DomainError("seed scale must be positive");
  const int dim = dimension(mode);
  const Reference ref = reference(u.grid_ptr());
  ModulationParams p = seed;
  System sys = evaluate(u, p, mode, ref, true);
  double err = max_abs(sys.residual, dim);
  int iters = 0;
  while (err > opt.tolerance) {
    if (iters >= opt.max_iters)
      throw BasinError("modulation Newton did not converge in " + std::to_string(opt.max_iters) +
                       " iterations (residual " + std::to_string(err) + ")");
    ++iters;
    const Eigen::MatrixXd J = sys.jacobian.topLeftCorner(dim, dim);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) throw BasinError("singular modulation Jacobian");
    Eigen::Vector4d d = Eigen::Vector4d::Zero();
    d.head(dim) = lu.solve(-sys.residual.head(dim));
    if (!d.allFinite()) throw BasinError("non-finite Newton step");
    if (!(p.lambda + d(0) > 0.0)) throw DomainError("Newton step drove the scale to a nonpositive value");

    // backtrack on the residual norm; accept the last trial if none improves
    const double norm0 = sys.residual.head(dim).norm();
    double step = 1.0;
    ModulationParams trial = shifted(p, d, step, dim);
    System next = evaluate(u, trial, mode, ref, false);
    for (int k = 0; k < 12 && !(next.residual.head(dim).norm() < norm0); ++k) {
      step *= 0.5;
      trial = shifted(p, d, step, dim);
      next = evaluate(u, trial, mode, ref, false);
    }
    p = trial;
    sys = evaluate(u, p, mode, ref, true);
    err = max_abs(sys.residual, dim);
  }

  DecompositionResult r{p.canonical(), std::nullopt, Field(u.grid_ptr()), {}, 0.0, iters};
  r.eps_u_frame = u - modulated_profile(invert(p), Profile::Q, u.grid_ptr());
  r.eps_l2 = lp_norm(r.eps_u_frame, 2.0);
  for (int i = 0; i < dim; ++i) r.ortho_residuals[i] = sys.residual(i);
  if (opt.materialize) {
    Field eps = apply(p, r.eps_u_frame);
    const auto g = u.grid_ptr();
    const Field q3 = sample_profile(Profile::Q3, g);
    const Field qx = sample_profile(Profile::Qx, g);
    const cplx i1(0.0, 1.0);
    r.ortho_residuals = {inner_product(eps, q3), inner_product(eps, q3 * i1), 0.0, 0.0};
    if (dim == 4) {
      r.ortho_residuals[2] = inner_product(eps, qx);
      r.ortho_residuals[3] = inner_product(eps, qx * i1);
    }
    r.eps_l2 = lp_norm(eps, 2.0);
    r.epsilon = std::move(eps);
  }
  return r;
}

ModulationParams seed_from_field(const Field& u) {
  const Grid& g = u.grid();
  const auto uv = u.values();
  double m = 0.0, mx = 0.0;
  for (std::size_t j = 0; j < uv.size(); ++j) {
    const double w = std::norm(uv[j]);
    m += w;
    mx += w * g.x(j);
  }
  if (!(m > 0.0)) throw BasinError("cannot seed a modulation fit from a zero field");
  const double x0 = mx / m;

  const auto c = spectrum(u);
  const auto k = g.wavenumbers();
  double ck = 0.0, cm = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    ck += k[j] * std::norm(c[j]);
    cm += std::norm(c[j]);
  }
  const double kbar = ck / cm;

  ModulationParams best{1.0, 0.0, x0, 0.0};
  double best_overlap = -1.0;
  cplx best_value = 0.0;
  for (int j = -12; j <= 12; ++j) {
    const double lam = std::exp2(0.25 * j);
    const ModulationParams p{lam, 0.0, x0, -lam * kbar};
    const cplx v = pull_back(u, p, Profile::Q, false).value;
    if (std::abs(v) > best_overlap) {
      best_overlap = std::abs(v);
      best = p;
      best_value = v;
    }
  }
  best.gamma = wrap(-std::arg(best_value));
  return best;
}

std::vector<std::vector<double>> jacobian_at_identity(ModulationMode mode, const GridPtr& grid) {
  const Field q = sample_profile(Profile::Q, grid);
  const System s = evaluate(q, ModulationParams{}, mode, reference(grid), true);
  const int dim = dimension(mode);
  std::vector<std::vector<double>> J(dim, std::vector<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) J[i][j] = s.jacobian(i, j);
  return J;
}

ModulationConstants modulation_constants(const GridPtr& grid) {
  const auto c = ground_state_constants(grid);
  const Field yq = Field::from_function(grid, [](double y) { return y * eval_q(y); });
  return {c.mass_sq, c.l4_fourth, c.grad_sq, inner_product(yq, yq)};
}

ModulationSeries track(const std::vector<double>& times, const std::vector<Field>& fields, ModulationMode mode,
                       std::optional<ModulationParams> first_seed) {
  if (times.size() != fields.size()) throw InputError("track needs one time per field");
  ModulationSeries series;
  series.mode = mode;
  if (fields.empty()) return series;
  series.constants = modulation_constants(fields.front().grid_ptr());
  const auto grid = fields.front().grid_ptr();
  const Field q = sample_profile(Profile::Q, grid);
  auto q_dot = [&](Profile h) { return inner_product(q, sample_profile(h, grid)); };
  const double q_y2q = q_dot(Profile::Y2Q);

  DecomposeOptions opt;
  opt.materialize = false;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    ModulationParams seed;
    const auto& fr = series.frames;
    if (k == 0) {
      seed = first_seed ? *first_seed : seed_from_field(fields[0]);
    } else if (fr.size() == 1) {
      seed = fr.back().params;
    } else {
      const auto& a = fr[fr.size() - 2].params;
      const auto& b = fr.back().params;
      const double dt_prev = fr.back().t - fr[fr.size() - 2].t;
      const double w = dt_prev != 0.0 ? (times[k] - fr.back().t) / dt_prev : 0.0;
      seed.lambda = b.lambda * std::pow(b.lambda / a.lambda, w);
      seed.gamma = b.gamma + w * (b.gamma - a.gamma);
      seed.x0 = b.x0 + w * (b.x0 - a.x0);
      seed.xi = b.xi + w * (b.xi - a.xi);
    }
    if (mode == ModulationMode::Symmetric2 && k > 0) {
      seed.x0 = fr.back().params.x0;
      seed.xi = fr.back().params.xi;
    }
    DecompositionResult d = [&]() -> DecompositionResult {
      try {
        return decompose(fields[k], mode, seed, opt);
      } catch (const std::exception& e) {
        series.truncated = "frame " + std::to_string(k) + " (t = " + std::to_string(times[k]) + "): " + e.what();
        return DecompositionResult{{}, std::nullopt, Field(grid), {}, -1.0, -1};
      }
    }();
    if (series.truncated) break;

    ModulationFrame f;
    f.t = times[k];
    f.params = d.params;
    if (k > 0) {
      const double prev = fr.back().params.gamma;
      const double target = fr.size() >= 2 ? seed.gamma : prev;
      f.params.gamma = d.params.gamma + kTwoPi * std::round((target - d.params.gamma) / kTwoPi);
      const double dt = f.t - fr.back().t;
      const double lp = fr.back().params.lambda;
      f.s = fr.back().s + 0.5 * dt * (1.0 / (lp * lp) + 1.0 / (f.params.lambda * f.params.lambda));
    }
    f.eps_l2 = d.eps_l2;
    f.newton_iters = d.newton_iters;
    const ModulationParams& p = d.params;
    f.eps2_lminus_q3 = pull_back(fields[k], p, Profile::LminusQ3, false).value.imag();
    f.eps2_lminus_qx = pull_back(fields[k], p, Profile::LminusQx, false).value.imag();
    f.eps_y2q = pull_back(fields[k], p, Profile::Y2Q, false).value.real() - q_y2q;
    f.eps2_generator = pull_back(fields[k], p, Profile::ScalingGenerator, false).value.imag();
    series.frames.push_back(f);
  }
  return series;
}

ModulationSeries track(const Trajectory& trajectory, ModulationMode mode, std::optional<ModulationParams> first_seed) {
  std::vector<double> times;
  std::vector<Field> fields;
  for (const auto& s : trajectory.steps) {
    times.push_back(s.t);
    fields.push_back(s.field);
  }
  return track(times, fields, mode, first_seed);
}

std::vector<double> nonuniform_derivative(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n < 3 || f.size() != n) throw InputError("derivative needs at least 3 samples");
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    // stencil nodes a < b < c (by index) and the evaluation point
    const std::size_t i = k == 0 ? 0 : (k == n - 1 ? n - 3 : k - 1);
    const double x0 = x[i], x1 = x[i + 1], x2 = x[i + 2], t = x[k];
    // derivative of the Lagrange quadratic through the three nodes, at t
    const double l0 = ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    d[k] = l0 * f[i] + l1 * f[i + 1] + l2 * f[i + 2];
  }
  return d;
}

namespace {

struct Columns {
  std::vector<double> s, log_lambda, lambda, gamma, x0, xi;
};

Columns columns(const ModulationSeries& series) {
  if (series.frames.size() < 3) throw InputError("modulation residuals need at least 3 frames");
  Columns c;
  for (const auto& f : series.frames) {
    c.s.push_back(f.s);
    c.lambda.push_back(f.params.lambda);
    c.log_lambda.push_back(std::log(f.params.lambda));
    c.gamma.push_back(f.params.gamma);
    c.x0.push_back(f.params.x0);
    c.xi.push_back(f.params.xi);
  }
  return c;
}

}  // namespace

std::vector<ModulationResiduals> ode_residuals(const ModulationSeries& series) {
  const Columns c = columns(series);
  const auto lam_s = nonuniform_derivative(c.s, c.log_lambda);
  const auto gam_s = nonuniform_derivative(c.s, c.gamma);
  const auto x_s = nonuniform_derivative(c.s, c.x0);
  const auto xi_s = nonuniform_derivative(c.s, c.xi);
  const auto& k = series.constants;
  std::vector<ModulationResiduals> out(series.frames.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto& f = series.frames[j];
    const double xi = f.params.xi;
    const double xs = x_s[j] / c.lambda[j];
    out[j].r_lambda = 0.25 * k.l4_fourth * lam_s[j] + f.eps2_lminus_q3;
    out[j].r_gamma = k.l4_fourth * (gam_s[j] + 1.0 - xs * xi - xi * xi);
    out[j].r_x = (xs + 2.0 * xi) * k.grad_sq + f.eps2_lminus_qx;
    out[j].r_xi = (xi_s[j] - lam_s[j] * xi) * 0.5 * k.mass_sq;
  }
  return out;
}

std::vector<double> virial_in_s(const ModulationSeries& series) {
  const Columns c = columns(series);
  std::vector<double> moment;
  for (const auto& f : series.frames) moment.push_back(f.eps_y2q);
  const auto d_moment = nonuniform_derivative(c.s, moment);
  const auto lam_s = nonuniform_derivative(c.s, c.log_lambda);
  std::vector<double> out(series.frames.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = d_moment[j] + lam_s[j] * series.constants.y2q_sq + 4.0 * series.frames[j].eps2_generator;
  return out;
}

}  // namespace nlslab
