#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <cohere/measures.hpp>
#include <cohere/roof.hpp>
#include <cohere/sampling.hpp>

#include "test_support.hpp"

using namespace cohere;
using Catch::Approx;

namespace {

DensityMatrix bloch_state(double x, double y, double z) {
  return DensityMatrix{Matrix(bloch_to_density(BlochVector{x, y, z}))};
}

}  // namespace

TEST_CASE("ensemble validation enforces weights, norms, and reconstruction") {
  PureEnsemble e;
  e.weights = RealVector(2);
  e.weights << 0.5, 0.5;
  e.states = Matrix(2, 2);
  e.states.col(0) << Complex(1.0, 0.0), Complex(0.0, 0.0);
  e.states.col(1) << Complex(0.0, 0.0), Complex(1.0, 0.0);
  REQUIRE_NOTHROW(validate_ensemble(e));
  REQUIRE((ensemble_matrix(e) - Matrix::Identity(2, 2) * 0.5)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  validate_reconstruction(e, Matrix::Identity(2, 2) * 0.5);

  PureEnsemble bad_weight = e;
  bad_weight.weights << 0.7, 0.5;  // sums to 1.2
  REQUIRE_THROWS_AS(validate_ensemble(bad_weight), std::invalid_argument);

  PureEnsemble bad_norm = e;
  bad_norm.states.col(0) *= 2.0;
  REQUIRE_THROWS_AS(validate_ensemble(bad_norm), std::invalid_argument);

  REQUIRE_THROWS_AS(validate_reconstruction(e, Matrix::Identity(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("ensemble average weights the functional") {
  PureEnsemble e;
  e.weights = RealVector(2);
  e.weights << 0.25, 0.75;
  e.states = Matrix(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  e.states.col(0) << Complex(1.0, 0.0), Complex(0.0, 0.0);  // l1 = 0
  e.states.col(1) << Complex(s, 0.0), Complex(s, 0.0);      // l1 = 1
  REQUIRE(ensemble_average(e, pure_l1_functional()) == Approx(0.75));
}

TEST_CASE("roof of a pure state is the functional value with one member") {
  Vector psi(3);
  psi << Complex(std::sqrt(0.5), 0.0), Complex(std::sqrt(0.3), 0.0),
      Complex(0.0, std::sqrt(0.2));
  DensityMatrix proj{Matrix(psi * psi.adjoint())};
  RoofResult r = roof_upper(proj, pure_l1_functional());
  REQUIRE(r.ensemble.size() == 1);
  REQUIRE(r.value == Approx(pure_c_l1(psi)).margin(1e-10));
}

TEST_CASE("roof rejects ensembles smaller than the rank") {
  DensityMatrix rho{Matrix(Matrix::Identity(3, 3) / 3.0)};
  RoofOptions opts;
  opts.ensemble_size = 2;  // below rank 3
  REQUIRE_THROWS_AS(roof_upper(rho, pure_l1_functional(), opts),
                    std::invalid_argument);
}

TEST_CASE("every roof ensemble reconstructs the input state") {
  Rng rng(3);
  RoofOptions opts;
  opts.restarts = 2;
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = hs_random_density(3, rng);
    RoofResult r = roof_upper(rho, pure_l1_functional(), opts);
    REQUIRE_NOTHROW(validate_ensemble(r.ensemble));
    REQUIRE_NOTHROW(validate_reconstruction(r.ensemble, rho.mat()));
  }
}

TEST_CASE("qubit l1 roof reaches the equatorial radius") {
  // the l1 roof of a qubit equals its l1 coherence
  DensityMatrix rho = bloch_state(1.0 / std::sqrt(2.0), 0.0, 0.0);
  RoofResult r = roof_upper(rho, pure_l1_functional());
  REQUIRE(r.value == Approx(1.0 / std::sqrt(2.0)).margin(1e-6));

  DensityMatrix tilted = bloch_state(0.5, 0.0, 0.2);
  RoofResult rt = roof_upper(tilted, pure_l1_functional());
  REQUIRE(rt.value == Approx(0.5).margin(1e-6));
}

TEST_CASE("qubit relative-entropy roof matches the closed form") {
  BlochVector b{1.0 / std::sqrt(2.0), 0.0, 0.0};
  DensityMatrix rho = bloch_state(b.x, b.y, b.z);
  RoofResult r = roof_upper(rho, pure_relent_functional());
  REQUIRE(r.value == Approx(qubit_cr_roof(b)).margin(1e-6));

  BlochVector b2{0.4, 0.3, -0.35};
  DensityMatrix rho2 = bloch_state(b2.x, b2.y, b2.z);
  RoofResult r2 = roof_upper(rho2, pure_relent_functional());
  REQUIRE(r2.value == Approx(qubit_cr_roof(b2)).margin(1e-5));
}

TEST_CASE("qubit l1 roof gap to the measure is nonnegative and tiny") {
  Rng rng(31);
  RoofOptions opts;
  opts.restarts = 4;
  for (int trial = 0; trial < 12; ++trial) {
    double x = 2.0 * rng.uniform() - 1.0;
    double y = 2.0 * rng.uniform() - 1.0;
    double z = 2.0 * rng.uniform() - 1.0;
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 0.95) {
      const double s = 0.95 / n;
      x *= s;
      y *= s;
      z *= s;
    }
    DensityMatrix rho = bloch_state(x, y, z);
    opts.seed = 100 + trial;
    RoofResult r = roof_upper(rho, pure_l1_functional(), opts);
    const double gap = r.value - c_l1(rho);
    REQUIRE(gap >= -1e-8);
    REQUIRE(gap <= 1e-4);
  }
}

TEST_CASE("roof never undercuts the measure") {
  Rng rng(37);
  RoofOptions opts;
  opts.restarts = 3;
  for (int trial = 0; trial < 8; ++trial) {
    DensityMatrix rho = hs_random_density(3, rng);
    opts.seed = 500 + trial;
    RoofResult r = roof_upper(rho, pure_l1_functional(), opts);
    REQUIRE(r.value >= c_l1(rho) - 1e-9);
    RoofResult rr = roof_upper(rho, pure_relent_functional(), opts);
    REQUIRE(rr.value >= c_r(rho) - 1e-8);
  }
}

TEST_CASE("warm starts never worsen the warm value") {
  Rng rng(41);
  DensityMatrix rho = hs_random_density(3, rng);
  RoofOptions first;
  first.restarts = 3;
  RoofResult base = roof_upper(rho, pure_l1_functional(), first);

  RoofOptions again;
  again.restarts = 1;
  again.warm_start = &base.ensemble;
  RoofResult refined = roof_upper(rho, pure_l1_functional(), again);
  REQUIRE(refined.value <= base.value + 1e-9);
}

TEST_CASE("grid oracle agrees with closed forms on the qubit") {
  BlochVector b{0.5, 0.0, 0.2};
  const double l1_oracle = qubit_roof_oracle(b, pure_l1_functional(), 120);
  REQUIRE(l1_oracle == Approx(0.5).margin(1e-6));

  const double re_oracle = qubit_roof_oracle(b, pure_relent_functional(), 120);
  REQUIRE(re_oracle == Approx(qubit_cr_roof(b)).margin(1e-5));
}

TEST_CASE("grid oracle tightens as the grid refines") {
  BlochVector b{0.45, 0.2, -0.3};
  const double coarse = qubit_roof_oracle(b, pure_l1_functional(), 90);
  const double fine = qubit_roof_oracle(b, pure_l1_functional(), 180);
  REQUIRE(fine <= coarse + 1e-9);
  REQUIRE_THROWS_AS(qubit_roof_oracle(b, pure_l1_functional(), 50),
                    std::invalid_argument);
}
