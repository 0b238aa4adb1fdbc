#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

/// L_+ f = -f_xx + f - 5 Q^4 f and L_- f = -f_xx + f - Q^4 f.
enum class LinearizedOperator { LPlus, LMinus };

/// Spectral -f_xx plus the pointwise potential; acts on real and imaginary parts alike.
Field apply_operator(LinearizedOperator which, const Field& f);

struct OperatorMatrix {
  LinearizedOperator which = LinearizedOperator::LPlus;
  GridPtr grid;
  /// Acts on grid samples; symmetric by construction.
  Eigen::MatrixXd entries;
};

/// Dense matrix of the operator on the grid. potential_scale multiplies the
/// Q^4 term (0 gives -d_xx + 1).
OperatorMatrix assemble(LinearizedOperator which, const GridPtr& grid, double potential_scale = 1.0);

/// Matrix-vector product on the real and imaginary parts of f.
Field multiply(const OperatorMatrix& op, const Field& f);

struct EigenPair {
  double value = 0.0;
  /// Real, L2-normalized on the grid.
  Field vector;
};

/// Lowest `count` eigenpairs (count in 1..10, else InputError) by a dense symmetric eigen-solve.
std::vector<EigenPair> low_spectrum(const OperatorMatrix& op, int count);

struct CoercivityOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  /// Restrict to even functions.
  bool even = false;
  /// Also run the dense projected eigen-solve (O(n^3)).
  bool eigen_solve = true;
};

struct CoercivityReport {
  /// min of (op u, u) / ||u||_{H^1}^2 over the eigen-solve and the trials.
  double constant = 0.0;
  double eigen_min = 0.0;
  double trial_min = 0.0;
  /// min over trials of ((op u, u) - ||u||^2) / ||u||^2.
  double trial_min_excess_l2 = 0.0;
  int trials = 0;
};

/// Empirical coercivity of the operator on the subspace L2-orthogonal to the
/// real constraint fields.
CoercivityReport constrained_coercivity(LinearizedOperator which, const GridPtr& grid,
                                        const std::vector<Field>& constraints, const CoercivityOptions& opt = {});

/// E(Q + eps) computed directly and split as
///   E(Q) + linear + 1/2 (L_+ eps_1, eps_1) + 1/2 (L_- eps_2, eps_2) - 1/2 ||eps||^2 + remainder,
/// with linear = -(Q, eps_1) (exactly, using the discrete Q_xx + Q^5) and
/// remainder = -1/6 int [12 Q^3 eps_1 |eps|^2 + 3 Q^2 |eps|^4 + A^3], A = 2 Q eps_1 + |eps|^2.
/// Under ||Q + eps|| = ||Q|| the linear term equals ||eps||^2 / 2.
struct EnergyExpansion {
  double direct = 0.0;
  double energy_q = 0.0;
  double linear = 0.0;
  double linear_mass_constrained = 0.0;  // ||eps||^2 / 2
  double quadratic_plus = 0.0;           // 1/2 (L_+ eps_1, eps_1)
  double quadratic_minus = 0.0;          // 1/2 (L_- eps_2, eps_2)
  double mass_term = 0.0;                // -1/2 ||eps||^2
  double remainder = 0.0;
  double decomposed = 0.0;
  double discrepancy = 0.0;  // direct - decomposed
};

EnergyExpansion energy_expansion(const Field& eps);

/// ||u||^2 + ||u_x||^2.
double h1_norm_sq(const Field& u);

}  // namespace nlslab
