#pragma once

// Numerical re-derivation of the alive-probability bound: maximize z(rho1)
// over arbitrary (chi1, chi2) pairs subject to the cat constraints, with no
// use of the closed-form root or the optimal family.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "catbound/catmodel.hpp"

namespace catbound {

struct OptimizerConfig {
  std::size_t env_dim = 2;
  std::size_t restarts = 32;
  std::uint64_t master_seed = 0;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  std::size_t penalty_rounds = 5;
  /// Extra multiplier-update rounds at the final penalty weight.
  std::size_t multiplier_rounds = 5;
  std::size_t max_iters_per_round = 5000;
  double tol_constraint = 1e-8;
  double tol_step = 1e-10;
  /// 0 = std::thread::hardware_concurrency().
  std::size_t threads = 0;

  /// Throws Error when a field violates its range.
  void validate() const;
};

struct OptimizationResult {
  double best_objective = 0.0;  // z(rho1)
  double best_p_alive = 0.0;
  BipartiteKet chi1;
  BipartiteKet chi2;
  FeasibilityReport report;
  std::size_t restart_index = 0;
  std::size_t iterations_total = 0;
  bool converged = false;
};

struct OracleReport {
  std::size_t samples = 0;
  std::size_t feasible_count = 0;
  double max_feasible_p_alive = 0.0;
  std::size_t violations_of_bound = 0;
};

struct SweepRow {
  double a = 0.0;
  double lambda = 0.0;
  double lambda_sq = 0.0;
  double residual = 0.0;
};

/// Raw parameter packing: 8d reals, chi1 then chi2, each qubit-major then
/// environment index, each complex amplitude as (re, im).
std::size_t packed_size(std::size_t env_dim);
std::vector<double> encode_pair(const BipartiteKet& chi1, const BipartiteKet& chi2);

/// chi1 normalized, chi2 orthogonalized against chi1 then normalized.
/// Throws LinearDependenceError when either step degenerates.
ChiPair decode_pair(std::span<const double> raw);

/// -z(rho1) + mu (c2^2 + c3^2); a degenerate decode yields a large finite value.
double penalized_objective(std::span<const double> raw, double mu);

OptimizationResult optimize(const OptimizerConfig& cfg);

/// Uniform grid over A in [-2, 2], ascending.
std::vector<SweepRow> sweep_a(std::size_t steps);

OracleReport sampling_oracle(std::size_t env_dim, std::size_t samples, std::uint64_t seed,
                             double slack, double feas_tol);

// Derivative-free local search used by optimize(). Exposed for testing.
struct SimplexOptions {
  std::size_t max_iters = 2000;
  double tol_step = 1e-10;
  /// Initial simplex edge, relative to each nonzero coordinate.
  double initial_scale = 0.05;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool step_converged = false;
};

/// Adaptive Nelder-Mead (dimension-dependent coefficients).
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, const SimplexOptions& options);

}  // namespace catbound
