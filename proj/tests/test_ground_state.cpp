#include <doctest.h>

#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"
#include "oracles.hpp"

using namespace nlslab;

TEST_CASE("Q pointwise") {
  CHECK(eval_q(0.0) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
  for (double x : {0.1, 0.7, 2.0, 9.0, 30.0}) {
    CHECK(eval_q(x) == eval_q(-x));
    CHECK(eval_q(x) == doctest::Approx(oracle::q(x)).epsilon(1e-13));
    CHECK(eval_q(x) > 0.0);
    CHECK(eval_q(x) < eval_q(0.9 * x));
  }
  CHECK(eval_q(5.0) / eval_q(4.0) == doctest::Approx(std::exp(-1.0)).epsilon(0.02));
  CHECK(eval_q(500.0) > 0.0);
  CHECK(std::isfinite(eval_q(1e4)));
}

TEST_CASE("profile slopes match hand derivatives") {
  for (double y : {-2.3, -0.4, 0.0, 0.8, 3.1}) {
    CHECK(profile_value(Profile::Qx, y) == doctest::Approx(oracle::qx(y)).epsilon(1e-13));
    CHECK(profile_slope(Profile::Qx, y) == doctest::Approx(oracle::qxx(y)).epsilon(1e-12).scale(1e-14));
    const double h = 1e-5;
    const double fd = (profile_value(Profile::Q3, y + h) - profile_value(Profile::Q3, y - h)) / (2 * h);
    CHECK(profile_slope(Profile::Q3, y) == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK_THROWS_AS(profile_slope(Profile::Y2Q, 0.3), InputError);
}

TEST_CASE("ground-state ODE residual") {
  auto g = Grid::make(32.0, 2048);
  CHECK(ode_residual(g) <= 1e-9);
  // refinement never hurts until the rounding floor (k^2 amplifies eps)
  double prev = ode_residual(Grid::make(32.0, 128));
  for (std::size_t n : {256u, 512u, 1024u, 2048u, 4096u}) {
    const double r = ode_residual(Grid::make(32.0, n));
    CHECK(r <= std::max(prev, 1e-11));
    prev = r;
  }
  CHECK(ode_residual(Field(g)) == 0.0);
  // a box that cuts Q at 2e-7 is visibly worse
  CHECK(ode_residual(Grid::make(16.0, 2048)) > 1e-7);
}

TEST_CASE("ground-state constants") {
  auto g = Grid::make(32.0, 2048);
  const auto c = ground_state_constants(g);
  CHECK(c.mass_sq == doctest::Approx(oracle::quad_mass_sq()).epsilon(1e-10));
  CHECK(c.mass_sq == doctest::Approx(oracle::kMassSq).epsilon(1e-10));
  CHECK(c.l4_fourth == doctest::Approx(oracle::kL4Fourth).epsilon(1e-10));
  CHECK(c.l6_sixth == doctest::Approx(oracle::quad_l6()).epsilon(1e-10));
  CHECK(c.grad_sq == doctest::Approx(oracle::quad_grad_sq()).epsilon(1e-10));
  CHECK(c.grad_sq == doctest::Approx(oracle::kGradSq).epsilon(1e-10));
  CHECK(c.relation_defect <= 1e-9);
}

TEST_CASE("Jacobian anchor identities") {
  auto g = Grid::make(32.0, 2048);
  const auto c = ground_state_constants(g);
  Field gen = sample_profile(Profile::ScalingGenerator, g);
  CHECK(inner_product(gen, sample_profile(Profile::Q3, g)) == doctest::Approx(c.l4_fourth / 4).epsilon(1e-10));
  Field ixq = Field::from_function(g, [](double x) { return cplx(0, x * oracle::q(x)); });
  Field iqx = sample_profile(Profile::Qx, g) * cplx(0, 1);
  CHECK(inner_product(ixq, iqx) == doctest::Approx(-c.mass_sq / 2).epsilon(1e-10));
  CHECK(inner_product(sample_profile(Profile::Y2Q, g), sample_profile(Profile::Q, g)) ==
        doctest::Approx(oracle::quad_y2q2()).epsilon(1e-10));
}

TEST_CASE("closed-form operator images") {
  auto g = Grid::make(32.0, 2048);
  Field q = sample_profile(Profile::Q, g);
  Field q4 = Field::from_function(g, [](double x) { return std::pow(oracle::q(x), 4); });
  for (auto [p, src] : {std::pair{Profile::LminusQ3, Profile::Q3}, {Profile::LminusQx, Profile::Qx}}) {
    Field f = sample_profile(src, g);
    Field lm = f - derivative(f, 2) - q4 * f;
    CHECK(lp_norm(lm - sample_profile(p, g), 2.0) < 1e-10);
  }
}
