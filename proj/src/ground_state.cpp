#include "nlslab/ground_state.hpp"

#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

double log_cosh(double a) {
  const double b = std::abs(a);
  return b + std::log1p(std::exp(-2.0 * b)) - std::numbers::ln2;
}

}  // namespace

double eval_q(double x) {
  // exp(log(.)/4) on the strictly positive argument; avoids cosh overflow.
  return std::exp(0.25 * (std::log(3.0) - 2.0 * log_cosh(2.0 * x)));
}

double profile_value(Profile p, double y) {
  const double q = eval_q(y);
  const double qx = -std::tanh(2.0 * y) * q;
  const double q2 = q * q;
  const double q4 = q2 * q2;
  switch (p) {
    case Profile::Q:
      return q;
    case Profile::Q3:
      return q2 * q;
    case Profile::Qx:
      return qx;
    case Profile::LminusQ3: {
      const double qxx = q - q4 * q;
      const double q3xx = 6.0 * q * qx * qx + 3.0 * q2 * qxx;
      return -q3xx - q4 * q2 * q + q2 * q;
    }
    case Profile::LminusQx:
      return 4.0 * q4 * qx;
    case Profile::Y2Q:
      return y * y * q;
    case Profile::ScalingGenerator:
      return 0.5 * q + y * qx;
  }
  return 0.0;
}

double profile_slope(Profile p, double y) {
  const double q = eval_q(y);
  const double qx = -std::tanh(2.0 * y) * q;
  switch (p) {
    case Profile::Q:
      return qx;
    case Profile::Q3:
      return 3.0 * q * q * qx;
    case Profile::Qx: {
      const double q2 = q * q;
      return q - q2 * q2 * q;
    }
    default:
      throw InputError("profile slope is only available for Q, Q^3 and Q'");
  }
}

Field sample_profile(Profile p, const GridPtr& grid) {
  return Field::from_function(grid, [p](double y) { return profile_value(p, y); });
}

GroundStateConstants ground_state_constants(const GridPtr& grid) {
  const Field q = sample_profile(Profile::Q, grid);
  GroundStateConstants c;
  c.mass_sq = inner_product(q, q);
  c.l4_fourth = std::pow(lp_norm(q, 4.0), 4.0);
  c.l6_sixth = std::pow(lp_norm(q, 6.0), 6.0);
  const Field qx = derivative(q, 1);
  c.grad_sq = inner_product(qx, qx);
  c.relation_defect = std::abs(c.grad_sq - c.l6_sixth / 3.0);
  return c;
}

double ode_residual(const Field& q) {
  Field r = derivative(q, 2);
  auto rv = r.values();
  const auto qv = q.values();
  for (std::size_t j = 0; j < rv.size(); ++j) {
    const cplx v = qv[j];
    const double m2 = std::norm(v);
    rv[j] += m2 * m2 * v - v;
  }
  return lp_norm(r, 2.0);
}

double ode_residual(const GridPtr& grid) { return ode_residual(sample_profile(Profile::Q, grid)); }

}  // namespace nlslab
