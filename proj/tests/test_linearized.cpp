#include <doctest.h>

#include <cmath>
#include <random>

#include "nlslab/errors.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/linearized.hpp"
#include "nlslab/noise.hpp"
#include "nlslab/spectral.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

// Dense work is O(n^3); 512 points on [-32, 32) resolve Q to round-off.
const GridPtr& grid() {
  static GridPtr g = Grid::make(32.0, 512);
  return g;
}

const GridPtr& fine() {
  static GridPtr g = Grid::make(32.0, 2048);
  return g;
}

Field q3_oracle(const GridPtr& g) {
  return Field::from_function(g, [](double x) { return std::pow(oracle::q(x), 3); });
}

double l2(const Field& f) { return std::sqrt(mass(f)); }

double alignment(const Field& v, const Field& w) { return std::abs(inner_product(v, w)) / (l2(v) * l2(w)); }

Field random_smooth(const GridPtr& g, std::uint64_t seed) {
  NoiseOptions no;
  no.cutoff = 6.0;
  no.envelope_width = 4.0;
  return band_limited_noise(g, 1.0, seed, no);
}

const OperatorMatrix& lplus() {
  static OperatorMatrix m = assemble(LinearizedOperator::LPlus, grid());
  return m;
}

const OperatorMatrix& lminus() {
  static OperatorMatrix m = assemble(LinearizedOperator::LMinus, grid());
  return m;
}

// Measured once (n = 512, L = 32) and frozen.
constexpr double kThirdEigenvalue = 1.002388;
constexpr double kH1Coercivity = 0.527291;
constexpr double kEnsembleEnergyRatio = 0.4238;

}  // namespace

TEST_CASE("L_+ Q^3 = -8 Q^3, L_+ Q_x = 0, L_- Q = 0") {
  const auto g = fine();
  const Field q3 = q3_oracle(g);
  CHECK(l2(apply_operator(LinearizedOperator::LPlus, q3) + 8.0 * q3) <= 1e-9);
  CHECK(l2(apply_operator(LinearizedOperator::LPlus, Field::from_function(g, oracle::qx))) <= 1e-9);
  CHECK(l2(apply_operator(LinearizedOperator::LMinus, Field::from_function(g, oracle::q))) <= 1e-9);
}

TEST_CASE("operators act on real and imaginary parts alike") {
  const Field f = random_smooth(grid(), 3);
  for (auto op : {LinearizedOperator::LPlus, LinearizedOperator::LMinus}) {
    const Field whole = apply_operator(op, f);
    const Field split = apply_operator(op, f.real_part()) + cplx(0, 1) * apply_operator(op, f.imag_part());
    CHECK(l2(whole - split) <= 1e-12);
  }
}

TEST_CASE("assembled matrix agrees with apply and is symmetric") {
  for (const auto* m : {&lplus(), &lminus()}) {
    CHECK((m->entries - m->entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Field f = random_smooth(grid(), 100 + s);
      CHECK(l2(multiply(*m, f) - apply_operator(m->which, f)) <= 1e-9 * l2(f));
    }
  }
}

TEST_CASE("potential-free operator is -d_xx + 1") {
  const auto m = assemble(LinearizedOperator::LPlus, grid(), 0.0);
  const auto sp = low_spectrum(m, 2);
  CHECK(sp[0].value == doctest::Approx(1.0).epsilon(1e-10));
  // the constant mode; next is k = dk, doubly degenerate
  const double dk = grid()->dk();
  CHECK(sp[1].value == doctest::Approx(1.0 + dk * dk).epsilon(1e-10));
}

TEST_CASE("low spectrum of L_+ and L_-") {
  const auto g = grid();
  const auto sp = low_spectrum(lplus(), 3);
  REQUIRE(sp.size() == 3);
  CHECK(std::abs(sp[0].value + 8.0) <= 1e-6);
  CHECK(alignment(sp[0].vector, q3_oracle(g)) >= 1.0 - 1e-8);
  CHECK(std::abs(sp[1].value) <= 1e-6);
  CHECK(alignment(sp[1].vector, Field::from_function(g, oracle::qx)) >= 1.0 - 1e-8);
  CHECK(sp[2].value >= 1.0);
  CHECK(sp[2].value == doctest::Approx(kThirdEigenvalue).epsilon(1e-5));

  const auto sm = low_spectrum(lminus(), 2);
  CHECK(std::abs(sm[0].value) <= 1e-6);
  CHECK(alignment(sm[0].vector, Field::from_function(g, oracle::q)) >= 1.0 - 1e-8);
  CHECK(sm[1].value > 1.0);

  for (const auto* list : {&sp, &sm})
    for (const auto& e : *list) {
      const auto& m = list == &sp ? lplus() : lminus();
      CHECK(l2(e.vector) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(l2(multiply(m, e.vector) - e.value * e.vector) <= 1e-7);
    }
  CHECK(std::abs(inner_product(sp[0].vector, sp[1].vector)) <= 1e-10);
}

TEST_CASE("low_spectrum rejects bad counts") {
  CHECK_THROWS_AS(low_spectrum(lplus(), 0), InputError);
  CHECK_THROWS_AS(low_spectrum(lplus(), 11), InputError);
}

TEST_CASE("L_- is nonnegative on random fields") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Field f = random_smooth(grid(), 500 + s);
    CHECK(inner_product(apply_operator(LinearizedOperator::LMinus, f), f) >= -1e-10 * mass(f));
  }
}

TEST_CASE("constrained coercivity") {
  const auto g = grid();
  const Field q3 = q3_oracle(g);
  const Field qx = Field::from_function(g, oracle::qx);

  SUBCASE("orthogonal to Q^3 and Q_x") {
    const auto r = constrained_coercivity(LinearizedOperator::LPlus, g, {q3, qx});
    CHECK(r.constant > 0.0);
    CHECK(r.eigen_min == doctest::Approx(kH1Coercivity).epsilon(1e-4));
    CHECK(r.trial_min >= r.eigen_min - 1e-9);
    CHECK(r.trial_min_excess_l2 >= -1e-9);
    CHECK(r.trials == 100);
  }
  SUBCASE("even, orthogonal to Q^3") {
    CoercivityOptions o;
    o.even = true;
    const auto r = constrained_coercivity(LinearizedOperator::LPlus, g, {q3}, o);
    CHECK(r.constant == doctest::Approx(kH1Coercivity).epsilon(1e-4));
  }
  SUBCASE("no constraints exposes the negative direction") {
    const auto r = constrained_coercivity(LinearizedOperator::LPlus, g, {});
    CHECK(r.constant < 0.0);
    // sup of (L u, u) / ||u||_{H^1}^2 along Q^3 alone
    const double along = -8.0 * mass(q3) / h1_norm_sq(q3);
    CHECK(r.eigen_min <= along + 1e-9);
  }
  SUBCASE("L_- without constraints") {
    const auto r = constrained_coercivity(LinearizedOperator::LMinus, g, {});
    CHECK(r.constant >= -1e-8);
  }
  SUBCASE("trials only") {
    CoercivityOptions o;
    o.eigen_solve = false;
    o.trials = 20;
    const auto r = constrained_coercivity(LinearizedOperator::LPlus, g, {q3, qx}, o);
    CHECK(r.trials == 20);
    CHECK(r.constant == r.trial_min);
    CHECK(r.constant > 0.0);
  }
}

TEST_CASE("energy expansion") {
  const auto g = grid();
  SUBCASE("E(Q) = 0") {
    CHECK(std::abs(energy_expansion(Field(g)).direct) <= 1e-10);
  }
  SUBCASE("decomposition is exact") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Field eps = 0.05 * random_smooth(g, 900 + s);
      const auto ex = energy_expansion(eps);
      CHECK(std::abs(ex.discrepancy) <= 1e-10);
    }
  }
  SUBCASE("mass-constrained linear term") {
    NoiseOptions no;
    no.admissible = true;
    no.mass_renormalize = true;
    const Field eps = band_limited_noise(g, 1e-2, 17, no);
    CHECK(mass(Field::from_function(g, oracle::q) + eps) == doctest::Approx(mass(sample_profile(Profile::Q, g))).epsilon(1e-12));
    const auto ex = energy_expansion(eps);
    CHECK(ex.linear == doctest::Approx(ex.linear_mass_constrained).epsilon(1e-8));
  }
  SUBCASE("phase-rotation direction") {
    // no linear term along iQ_x, so the energy is quadratic in a
    const Field qx = Field::from_function(g, oracle::qx);
    const double e1 = energy_expansion(cplx(0, 1e-2) * qx).direct;
    const double e2 = energy_expansion(cplx(0, 1e-3) * qx).direct;
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 == doctest::Approx(100.0).epsilon(1e-3));
  }
  SUBCASE("remainder is cubic") {
    const Field eps = 1e-2 * random_smooth(g, 31);
    const double r1 = energy_expansion(eps).remainder;
    const double r2 = energy_expansion(0.5 * eps).remainder;
    CHECK(std::abs(r1 / r2) == doctest::Approx(8.0).epsilon(0.05));
  }
}

TEST_CASE("energy coercivity over an admissible even ensemble") {
  const auto g = grid();
  NoiseOptions no;
  no.admissible = true;
  no.even = true;
  no.mass_renormalize = true;
  double worst = INFINITY;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Field eps = band_limited_noise(g, 0.99e-2, 100 + s, no);
    REQUIRE(l2(eps) <= 1e-2);
    CHECK(std::abs(inner_product(eps, q3_oracle(g))) <= 1e-12);
    CHECK(std::abs(inner_product(eps, cplx(0, 1) * q3_oracle(g))) <= 1e-12);
    worst = std::min(worst, energy(sample_profile(Profile::Q, g) + eps) / h1_norm_sq(eps));
  }
  CHECK(worst > 0.0);
  CHECK(worst == doctest::Approx(kEnsembleEnergyRatio).epsilon(0.2));
}

TEST_CASE("(eps_2, L_- Q^3) through apply and through the matrix") {
  const Field q3 = q3_oracle(grid());
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Field e2 = random_smooth(grid(), 70 + s).real_part();
    const double a = inner_product(e2, apply_operator(LinearizedOperator::LMinus, q3));
    const double b = inner_product(multiply(lminus(), e2), q3);
    CHECK(std::abs(a - b) <= 1e-10);
  }
}
