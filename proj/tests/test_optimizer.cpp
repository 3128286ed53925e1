#include "doctest.h"

#include <cmath>

#include "catbound/optimizer.hpp"
#include "helpers.hpp"

using namespace catbound;

TEST_CASE("nelder_mead minimizes a shifted quadratic and Rosenbrock") {
  auto quad = [](std::span<const double> x) { return std::pow(x[0] - 1, 2) + 3 * std::pow(x[1] + 2, 2); };
  SimplexResult r = nelder_mead(quad, {0.0, 0.0}, SimplexOptions{5000, 1e-12, 0.5});
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(r.step_converged);

  auto rosen = [](std::span<const double> x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
  r = nelder_mead(rosen, {-1.2, 1.0}, SimplexOptions{20000, 1e-12, 0.1});
  CHECK(r.value < 1e-10);
  CHECK_THROWS_AS(nelder_mead(quad, {}, {}), DimensionError);
}

TEST_CASE("encode / decode roundtrip and objective edge cases") {
  const OptimalTriple t = construct_optimal(CVector::basis(3, 0), CVector::basis(3, 1));
  const auto raw = encode_pair(t.chi1, t.chi2);
  CHECK(raw.size() == packed_size(3));
  const ChiPair back = decode_pair(raw);
  CHECK(testing::max_diff(back.chi1.amp(), t.chi1.amp()) < 1e-12);
  CHECK(ray_distance(back.chi2, t.chi2) < 1e-12);
  // mu = 0 is the bare objective -z(rho1).
  CHECK(penalized_objective(raw, 0.0) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-12));
  // At the optimum the penalty term vanishes.
  CHECK(std::abs(penalized_objective(raw, 1e6) - penalized_objective(raw, 0.0)) < 1e-12);
  std::vector<double> zeros(packed_size(2), 0.0);
  CHECK(penalized_objective(zeros, 1.0) >= 1e12);
  CHECK_THROWS(decode_pair(zeros));
  CHECK_THROWS_AS(decode_pair(std::vector<double>(7, 1.0)), DimensionError);
}

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.restarts = 0;
  CHECK_THROWS(c.validate());
  c = {};
  c.env_dim = 1;
  CHECK_THROWS(c.validate());
  c = {};
  c.penalty_growth = 1.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("optimize finds the bound at d = 2 and is seed-deterministic") {
  OptimizerConfig c;
  c.restarts = 4;
  c.master_seed = 42;
  const OptimizationResult a = optimize(c);
  CHECK(a.converged);
  CHECK(std::abs(a.best_p_alive - oracle::kLambdaSqMax) < 1e-6);
  CHECK(a.report.c1_chi_overlap <= 1e-8);
  CHECK(a.report.c2_rho_distance <= 1e-8);
  CHECK(a.report.c3_bloch_antipodal <= 1e-8);

  c.threads = 1;
  const OptimizationResult b = optimize(c);
  CHECK(b.best_p_alive == a.best_p_alive);
  CHECK(b.restart_index == a.restart_index);
  CHECK(b.chi1.amp() == a.chi1.amp());
}

TEST_CASE("sweep_a grid") {
  const auto rows = sweep_a(5);
  REQUIRE(rows.size() == 5);
  CHECK(rows.front().a == -2.0);
  CHECK(rows.back().a == 2.0);
  for (const auto& r : rows) {
    CHECK(std::abs(r.lambda - oracle::lambda_of_a(r.a)) < 1e-12);
    CHECK(r.lambda_sq == doctest::Approx(r.lambda * r.lambda));
  }
  CHECK_THROWS(sweep_a(1));
}

TEST_CASE("sampling oracle: no feasible sample beats the bound") {
  const OracleReport r = sampling_oracle(2, 20000, 5, 1e-9, 0.05);
  CHECK(r.samples == 20000);
  CHECK(r.violations_of_bound == 0);
  CHECK(r.feasible_count <= r.samples);
  // The filter is live: a loose tolerance admits samples.
  const OracleReport loose = sampling_oracle(2, 20000, 5, 1e-9, 0.5);
  CHECK(loose.feasible_count > 0);
  const OracleReport again = sampling_oracle(2, 20000, 5, 1e-9, 0.5);
  CHECK(again.feasible_count == loose.feasible_count);
  CHECK(again.max_feasible_p_alive == loose.max_feasible_p_alive);
}
