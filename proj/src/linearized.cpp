#include "nlslab/linearized.hpp"

#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/noise.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

double potential_coefficient(LinearizedOperator which) { return which == LinearizedOperator::LPlus ? 5.0 : 1.0; }

double q4(double x) {
  const double q = eval_q(x);
  return q * q * q * q;
}

// First column of a real symmetric circulant with Fourier multiplier m(k).
std::vector<double> circulant_column(const Grid& g, double (*m)(double, double), double arg) {
  const std::size_t n = g.size();
  std::vector<cplx> c(n), col(n);
  const auto k = g.wavenumbers();
  for (std::size_t j = 0; j < n; ++j) c[j] = m(k[j], arg);
  g.inverse(c, col);
  std::vector<double> out(n);
  // enforce exact symmetry col[m] = col[n - m]
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.5 * (col[j].real() + col[(n - j) % n].real());
  return out;
}

double neg_laplacian(double k, double) { return k * k; }
double inv_sqrt_h1(double k, double) { return 1.0 / std::sqrt(1.0 + k * k); }

Eigen::MatrixXd circulant(const std::vector<double>& col) {
  const std::size_t n = col.size();
  Eigen::MatrixXd M(n, n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j) M(j, l) = col[(j + n - l) % n];
  return M;
}

// Lowest `count` eigenpairs of a symmetric matrix. Eigen's solver rather than
// LAPACK: some OpenBLAS kernels return wrong vectors on AVX-512 machines.
void lowest_eigen(const Eigen::MatrixXd& A, int count, std::vector<double>& values, Eigen::MatrixXd* vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DomainError("symmetric eigen-solve did not converge");
  values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
  if (vectors) *vectors = es.eigenvectors().leftCols(count);
}

}  // namespace

Field apply_operator(LinearizedOperator which, const Field& f) {
  Field out = f - derivative(f, 2);
  const double c = potential_coefficient(which);
  const Grid& g = f.grid();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= c * q4(g.x(j)) * f[j];
  return out;
}

OperatorMatrix assemble(LinearizedOperator which, const GridPtr& grid, double potential_scale) {
  OperatorMatrix op{which, grid, circulant(circulant_column(*grid, neg_laplacian, 0.0))};
  const double c = potential_scale * potential_coefficient(which);
  for (std::size_t j = 0; j < grid->size(); ++j) op.entries(j, j) += 1.0 - c * q4(grid->x(j));
  return op;
}

Field multiply(const OperatorMatrix& op, const Field& f) {
  const std::size_t n = f.size();
  if (n != static_cast<std::size_t>(op.entries.rows())) throw DimensionError("operator and field sizes differ");
  Eigen::VectorXd re(n), im(n);
  for (std::size_t j = 0; j < n; ++j) {
    re(j) = f[j].real();
    im(j) = f[j].imag();
  }
  const Eigen::VectorXd a = op.entries * re, b = op.entries * im;
  Field out(f.grid_ptr());
  for (std::size_t j = 0; j < n; ++j) out[j] = cplx(a(j), b(j));
  return out;
}

std::vector<EigenPair> low_spectrum(const OperatorMatrix& op, int count) {
  if (count < 1 || count > 10) throw InputError("low_spectrum count must be in 1..10");
  Eigen::MatrixXd A = op.entries;
  std::vector<double> values;
  Eigen::MatrixXd vecs;
  lowest_eigen(A, count, values, &vecs);
  std::vector<EigenPair> out;
  const double scale = 1.0 / std::sqrt(op.grid->spacing());
  for (int i = 0; i < count; ++i) {
    Field v(op.grid);
    for (std::size_t j = 0; j < op.grid->size(); ++j) v[j] = vecs(j, i) * scale;
    out.push_back({values[i], std::move(v)});
  }
  return out;
}

double h1_norm_sq(const Field& u) { return mass(u) + gradient_sq(u); }

CoercivityReport constrained_coercivity(LinearizedOperator which, const GridPtr& grid,
                                        const std::vector<Field>& constraints, const CoercivityOptions& opt) {
  const std::size_t n = grid->size();
  const cplx i1(0.0, 1.0);

  // Real constraint directions, orthonormalized in the grid inner product.
  std::vector<Field> basis;
  for (Field c : constraints) {
    if (opt.even) c = even_part(c);
    for (const auto& b : basis) c -= b * cplx(inner_product(c, b));
    const double nrm = lp_norm(c, 2.0);
    if (nrm > 1e-12) basis.push_back(c * cplx(1.0 / nrm));
  }
  auto constrain = [&](Field u) {
    if (opt.even) u = even_part(u);
    for (const auto& b : basis) {
      u -= b * cplx(inner_product(u, b));
      u -= b * (i1 * inner_product(u, b * i1));
    }
    return u;
  };

  CoercivityReport rep;
  rep.eigen_min = std::numeric_limits<double>::infinity();
  if (opt.eigen_solve) {
    // K = C M C with C = (1 - d_xx)^{-1/2}: Rayleigh quotient of K in w equals
    // (M u, u) / ||u||_{H^1}^2 for u = C w.
    const Eigen::MatrixXd C = circulant(circulant_column(*grid, inv_sqrt_h1, 0.0));
    // C (1 - d_xx) C is the identity, so K = I - c C diag(Q^4) C
    Eigen::MatrixXd DC = C;
    const double c = potential_coefficient(which);
    for (std::size_t j = 0; j < n; ++j) DC.row(j) *= c * q4(grid->x(j));
    Eigen::MatrixXd K = -(C * DC);
    K.diagonal().array() += 1.0;
    K = 0.5 * (K + K.transpose()).eval();

    // kept subspace: even part (if requested) minus the constraint span, in w-coordinates
    auto mirror = [n](std::size_t j) { return (n - j) % n; };
    Eigen::MatrixXd keep_complement = Eigen::MatrixXd::Zero(n, n);
    if (opt.even) {
      Eigen::MatrixXd E(n, n);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) E(j, l) = 0.25 * (K(j, l) + K(mirror(j), l) + K(j, mirror(l)) + K(mirror(j), mirror(l)));
      K = std::move(E);
      for (std::size_t j = 0; j < n; ++j) {
        keep_complement(j, j) += 0.5;
        keep_complement(mirror(j), j) -= 0.5;
      }
    }
    if (!basis.empty()) {
      // u = C w is orthogonal to v iff w is orthogonal to C v
      Eigen::MatrixXd W(n, basis.size());
      for (std::size_t b = 0; b < basis.size(); ++b)
        for (std::size_t j = 0; j < n; ++j) W(j, b) = basis[b][j].real();
      W = (C * W).eval();
      if (opt.even)
        for (Eigen::Index b = 0; b < W.cols(); ++b) {
          Eigen::VectorXd col = W.col(b);
          for (std::size_t j = 0; j < n; ++j) W(j, b) = 0.5 * (col(j) + col(mirror(j)));
        }
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
      const Eigen::MatrixXd Qm = qr.householderQ() * Eigen::MatrixXd::Identity(n, W.cols());
      const Eigen::MatrixXd KQ = K * Qm;
      const Eigen::MatrixXd QKQ = Qm.transpose() * KQ;
      K -= Qm * KQ.transpose() + KQ * Qm.transpose();
      K += Qm * QKQ * Qm.transpose();
      keep_complement += Qm * Qm.transpose();
    }
    const double shift = 1e3;
    Eigen::MatrixXd A = K + shift * keep_complement;
    A = 0.5 * (A + A.transpose()).eval();
    std::vector<double> values;
    Eigen::MatrixXd vecs;
    lowest_eigen(A, 1, values, nullptr);
    rep.eigen_min = values[0];
  }

  rep.trial_min = std::numeric_limits<double>::infinity();
  rep.trial_min_excess_l2 = std::numeric_limits<double>::infinity();
  NoiseOptions no;
  no.cutoff = 6.0;
  no.envelope_width = 3.0;
  for (int t = 0; t < opt.trials; ++t) {
    Field u = constrain(band_limited_noise(grid, 1.0, opt.seed + static_cast<std::uint64_t>(t), no).real_part());
    const double form = inner_product(apply_operator(which, u), u);
    const double l2 = mass(u);
    rep.trial_min = std::min(rep.trial_min, form / h1_norm_sq(u));
    rep.trial_min_excess_l2 = std::min(rep.trial_min_excess_l2, (form - l2) / l2);
  }
  rep.trials = opt.trials;
  rep.constant = std::min(rep.eigen_min, rep.trial_min);
  return rep;
}

EnergyExpansion energy_expansion(const Field& eps) {
  const auto g = eps.grid_ptr();
  const Field q = sample_profile(Profile::Q, g);
  const Field e1 = eps.real_part();
  const Field e2 = eps.imag_part();
  EnergyExpansion r;
  r.direct = energy(q + eps);
  r.energy_q = energy(q);

  Field lin = derivative(q, 2);
  for (std::size_t j = 0; j < lin.size(); ++j) lin[j] += std::pow(q[j].real(), 5);
  r.linear = -inner_product(lin, e1);
  const double m = mass(eps);
  r.linear_mass_constrained = 0.5 * m;
  r.quadratic_plus = 0.5 * inner_product(apply_operator(LinearizedOperator::LPlus, e1), e1);
  r.quadratic_minus = 0.5 * inner_product(apply_operator(LinearizedOperator::LMinus, e2), e2);
  r.mass_term = -0.5 * m;

  double acc = 0.0;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const double Q = q[j].real();
    const double a = e1[j].real();
    const double m2 = std::norm(eps[j]);
    const double A = 2.0 * Q * a + m2;
    acc += 12.0 * Q * Q * Q * a * m2 + 3.0 * Q * Q * m2 * m2 + A * A * A;
  }
  r.remainder = -acc * g->spacing() / 6.0;
  r.decomposed = r.energy_q + r.linear + r.quadratic_plus + r.quadratic_minus + r.mass_term + r.remainder;
  r.discrepancy = r.direct - r.decomposed;
  return r;
}

}  // namespace nlslab
