#include "doctest.h"

#include <cmath>

#include "catbound/catmodel.hpp"
#include "helpers.hpp"

using namespace catbound;

// Frozen from oracle::lambda_of_a (bisection on 2l^2 + A l sqrt(1-l^2) - 1).
TEST_CASE("lambda(A) matches the bisection oracle") {
  CHECK(lambda_max_sq() == doctest::Approx(oracle::kLambdaSqMax).epsilon(1e-15));
  CHECK(lambda_max() * lambda_max() + lambda_max_complement() * lambda_max_complement() ==
        doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i <= 400; ++i) {
    const double a = -2.0 + i / 100.0;
    const double got = lambda_from_overlap(OverlapA{a});
    CHECK(std::abs(got - oracle::lambda_of_a(a)) < 1e-12);
    CHECK(std::abs(lambda_residual(got, OverlapA{a})) < 1e-12);
  }
  CHECK(lambda_from_overlap(OverlapA{0.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(std::pow(lambda_from_overlap(OverlapA{2.0}), 2) == doctest::Approx(0.5 - std::sqrt(2.0) / 4).epsilon(1e-12));
  CHECK_THROWS(lambda_from_overlap(OverlapA{2.1}));
  CHECK_THROWS(lambda_from_overlap(OverlapA{-2.5}));
}

TEST_CASE("build_chi_pair gives orthonormal states with the stated Schmidt data") {
  const CVector e0 = CVector::basis(3, 0), e1 = CVector::basis(3, 1), e2 = CVector::basis(3, 2);
  CatConfiguration cfg{0.8, e0, e1, e2, e0};
  const ChiPair p = build_chi_pair(cfg);
  CHECK(std::abs(inner(p.chi1, p.chi1) - 1.0) < 1e-14);
  CHECK(p_alive(partial_trace_env(p.chi1)) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(p_dead(partial_trace_env(p.chi2)) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(overlap_a(cfg).value == 0.0);

  CatConfiguration bad = cfg;
  bad.lambda = 1.2;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.phi2 = e2;
  CHECK_THROWS(build_chi_pair(bad));
  bad = cfg;
  bad.phi1 = CVector::basis(2, 0);
  CHECK_THROWS_AS(build_chi_pair(bad), DimensionError);
}

TEST_CASE("xi states are singular at the endpoints") {
  const CVector e0 = CVector::basis(2, 0), e1 = CVector::basis(2, 1);
  CHECK_THROWS_AS(xi_states(CatConfiguration{0.0, e0, e1, e0, e1}), SingularConfigurationError);
  CHECK_THROWS_AS(xi_states(CatConfiguration{1.0, e0, e1, e0, e1}), SingularConfigurationError);
}

TEST_CASE("optimal family satisfies every constraint for canonical and random pairs") {
  Rng rng(7);
  for (std::size_t d : {2, 3, 5, 7}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto pair = trial == 0 ? std::array<CVector, 2>{CVector::basis(d, 0), CVector::basis(d, 1)}
                                   : random_orthonormal_pair(d, rng);
      const OptimalTriple t = construct_optimal(pair[0], pair[1]);
      const auto rho = oracle::partial_trace(testing::flat(t.chi), d);
      const auto rho1 = oracle::partial_trace(testing::flat(t.chi1), d);
      const auto rho2 = oracle::partial_trace(testing::flat(t.chi2), d);
      CHECK(oracle::trace_distance(rho, rho1) < 1e-12);
      const auto p1 = oracle::bloch(rho1), p2 = oracle::bloch(rho2);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(p1[k] + p2[k]) < 1e-12);
      CHECK(std::abs(p1[0]) + std::abs(p1[1]) < 1e-12);
      CHECK(std::abs(rho1[0][0].real() - oracle::kLambdaSqMax) < 1e-10);
      CHECK(std::abs(rho2[1][1].real() - oracle::kLambdaSqMax) < 1e-10);

      const FeasibilityReport r = check_constraints(t.chi1, t.chi2, FeasibilityTolerances::uniform(1e-12));
      CHECK(r.model_defined);
      CHECK(r.feasible);

      const CatConfiguration cfg = optimal_configuration(pair[0], pair[1]);
      const ChiPair built = build_chi_pair(cfg);
      CHECK(testing::max_diff(built.chi1.amp(), t.chi1.amp()) < 1e-12);
      CHECK(testing::max_diff(built.chi2.amp(), t.chi2.amp()) < 1e-12);
      const XiStates xi = xi_states(cfg);
      CHECK(xi.xi1_norm_residual < 1e-12);
      CHECK(xi.xi2_norm_residual < 1e-12);
      CHECK(xi.overlap_residual < 1e-12);
    }
  }
  CHECK_THROWS_AS(construct_optimal(CVector{1.0}, CVector{1.0}), DimensionError);
}

TEST_CASE("a non-antipodal pair is reported infeasible") {
  // Both states alive-heavy: same z sign, so c3 fails.
  const CVector e0 = CVector::basis(2, 0), e1 = CVector::basis(2, 1);
  const BipartiteKet chi1 = tensor({1.0, 0.0}, e0);
  const BipartiteKet chi2 = tensor({1.0, 0.0}, e1);
  const FeasibilityReport r = check_constraints(chi1, chi2);
  CHECK(r.c1_chi_overlap < 1e-15);
  CHECK(r.c3_bloch_antipodal == doctest::Approx(2.0));
  CHECK_FALSE(r.feasible);
  CHECK_THROWS_AS(check_constraints(chi1, tensor({1.0, 0.0}, CVector::basis(3, 0))), DimensionError);
}

// The printed prose gives P_III a negative z-component; evaluating the
// states themselves gives +sqrt2/2 (and P_II = -P_I forces the sign pattern
// below), so the derived values are what is asserted.
TEST_CASE("isolated-qubit triplet geometry") {
  const QubitTriplet t = qubit_triplet();
  auto p = [](const CVector& v) {
    return oracle::bloch({{{v[0] * std::conj(v[0]), v[0] * std::conj(v[1])}, {v[1] * std::conj(v[0]), v[1] * std::conj(v[1])}}});
  };
  const auto p1 = p(t.one), p2 = p(t.two), p3 = p(t.three);
  const double h = std::sqrt(2.0) / 2;
  CHECK(std::abs(inner(t.one, t.two)) < 1e-12);
  CHECK(std::abs(p1[2] - h) < 1e-12);
  CHECK(std::abs(p2[2] + h) < 1e-12);
  CHECK(std::abs(p3[2] - h) < 1e-12);
  CHECK(std::abs(p1[0] - h) < 1e-12);
  CHECK(std::abs(p3[0] + h) < 1e-12);
  CHECK(std::abs(p1[0] * p3[0] + p1[1] * p3[1] + p1[2] * p3[2]) < 1e-12);
}
