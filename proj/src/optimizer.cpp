#include "catbound/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

namespace catbound {

namespace {

constexpr double kDegeneratePenalty = 1e12;

struct BlochTriple {
  BlochVector chi;
  BlochVector chi1;
  BlochVector chi2;
};

BlochTriple bloch_triple(const ChiPair& pair) {
  const auto chi = combine(std::sqrt(0.5), pair.chi1, std::sqrt(0.5), pair.chi2).ket;
  return {bloch(partial_trace_env(chi)), bloch(partial_trace_env(pair.chi1)),
          bloch(partial_trace_env(pair.chi2))};
}

// The six smooth constraint components: (P - P1)/2 has norm c2 and
// P1 + P2 has norm c3.
std::array<double, 6> constraint_components(const BlochTriple& p) {
  const BlochVector d = (p.chi - p.chi1) * 0.5;
  const BlochVector a = p.chi1 + p.chi2;
  return {d.x, d.y, d.z, a.x, a.y, a.z};
}

double augmented_objective(std::span<const double> raw, double mu, const std::array<double, 6>& mult) {
  std::optional<ChiPair> pair;
  try {
    pair.emplace(decode_pair(raw));
  } catch (const Error&) {
    return kDegeneratePenalty;
  }
  const BlochTriple p = bloch_triple(*pair);
  const auto h = constraint_components(p);
  double value = -p.chi1.z;
  for (std::size_t i = 0; i < h.size(); ++i) value += mult[i] * h[i] + mu * h[i] * h[i];
  return value;
}

struct Candidate {
  std::size_t restart_index = 0;
  std::vector<double> raw;
  std::size_t iterations = 0;
  double objective = -std::numeric_limits<double>::infinity();
  double infeasibility = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

Candidate run_restart(const OptimizerConfig& cfg, std::size_t index) {
  Rng rng(mix_seed(cfg.master_seed, index));
  const std::size_t flat_dim = 2 * cfg.env_dim;
  const CVector start1 = random_unit(flat_dim, rng);
  const CVector start2 = random_unit(flat_dim, rng);

  std::vector<double> x;
  x.reserve(packed_size(cfg.env_dim));
  for (const CVector* v : {&start1, &start2}) {
    for (const auto& z : *v) {
      x.push_back(z.real());
      x.push_back(z.imag());
    }
  }

  Candidate c;
  c.restart_index = index;
  std::array<double, 6> mult{};
  double mu = cfg.penalty_init;
  const std::size_t rounds = cfg.penalty_rounds + cfg.multiplier_rounds;
  SimplexOptions options{cfg.max_iters_per_round, cfg.tol_step};
  for (std::size_t round = 0; round < rounds; ++round) {
    // Later rounds start close to the solution; shrink the initial simplex.
    options.initial_scale = std::max(1e-5, 0.05 * std::pow(0.2, static_cast<double>(round)));
    auto f = [&](std::span<const double> raw) { return augmented_objective(raw, mu, mult); };
    SimplexResult res = nelder_mead(f, std::move(x), options);
    c.iterations += res.iterations;
    try {
      // Re-encode in canonical form (unit chi1, chi2 orthonormal to it) so the
      // next round's simplex is not stretched along the gauge directions.
      const ChiPair pair = decode_pair(res.x);
      x = encode_pair(pair.chi1, pair.chi2);
      const auto h = constraint_components(bloch_triple(pair));
      for (std::size_t i = 0; i < h.size(); ++i) mult[i] += 2.0 * mu * h[i];
    } catch (const Error&) {
      x = std::move(res.x);
      break;
    }
    if (round + 1 < cfg.penalty_rounds) mu *= cfg.penalty_growth;
  }

  {
    // Feasibility restoration: drive the residual components to zero with the
    // objective switched off, starting from the final multiplier round.
    auto g = [](std::span<const double> raw) {
      try {
        const auto h = constraint_components(bloch_triple(decode_pair(raw)));
        double v = 0.0;
        for (double hi : h) v += hi * hi;
        return v;
      } catch (const Error&) {
        return kDegeneratePenalty;
      }
    };
    SimplexResult res = nelder_mead(g, x, {cfg.max_iters_per_round, cfg.tol_step, 1e-3});
    c.iterations += res.iterations;
    x = std::move(res.x);
  }
  c.raw = std::move(x);
  try {
    const ChiPair pair = decode_pair(c.raw);
    const FeasibilityReport report =
        check_constraints(pair.chi1, pair.chi2, FeasibilityTolerances::uniform(cfg.tol_constraint));
    c.objective = bloch(partial_trace_env(pair.chi1)).z;
    c.infeasibility = std::max({report.c1_chi_overlap, report.c2_rho_distance, report.c3_bloch_antipodal});
    c.feasible = report.feasible;
  } catch (const Error&) {
  }
  return c;
}

// Deterministic merge: feasible beats infeasible; among feasible the larger
// objective wins, among infeasible the smaller violation; ties go to the
// lower restart index.
bool better(const Candidate& a, const Candidate& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) {
    if (a.objective != b.objective) return a.objective > b.objective;
  } else if (a.infeasibility != b.infeasibility) {
    return a.infeasibility < b.infeasibility;
  }
  return a.restart_index < b.restart_index;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (env_dim < 2) throw Error("optimizer: env_dim must be >= 2");
  if (env_dim > 64) throw Error("optimizer: env_dim must be <= 64");
  if (restarts < 1) throw Error("optimizer: restarts must be positive");
  if (!(penalty_init > 0.0)) throw Error("optimizer: penalty_init must be > 0");
  if (!(penalty_growth > 1.0)) throw Error("optimizer: penalty_growth must be > 1");
  if (penalty_rounds < 1) throw Error("optimizer: penalty_rounds must be positive");
  if (max_iters_per_round < 1) throw Error("optimizer: max_iters_per_round must be positive");
  if (!(tol_constraint > 0.0)) throw Error("optimizer: tol_constraint must be > 0");
  if (!(tol_step > 0.0)) throw Error("optimizer: tol_step must be > 0");
}

std::size_t packed_size(std::size_t env_dim) { return 8 * env_dim; }

std::vector<double> encode_pair(const BipartiteKet& chi1, const BipartiteKet& chi2) {
  if (chi1.env_dim() != chi2.env_dim()) throw DimensionError("encode_pair: environment dimensions differ");
  std::vector<double> raw;
  raw.reserve(packed_size(chi1.env_dim()));
  for (const BipartiteKet* k : {&chi1, &chi2}) {
    for (const auto& z : k->amp().entries()) {
      raw.push_back(z.real());
      raw.push_back(z.imag());
    }
  }
  return raw;
}

ChiPair decode_pair(std::span<const double> raw) {
  if (raw.size() < 8 || raw.size() % 8 != 0)
    throw DimensionError("decode_pair: parameter length must be a positive multiple of 8");
  const std::size_t d = raw.size() / 8;
  std::array<CVector, 2> flat{CVector(2 * d), CVector(2 * d)};
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2 * d; ++i)
      flat[j][i] = Complex(raw[j * 4 * d + 2 * i], raw[j * 4 * d + 2 * i + 1]);
  for (const auto& v : flat) require_finite(v, "decode_pair");
  const auto ortho = gram_schmidt(flat);

  auto to_ket = [d](const CVector& v) {
    CMatrix amp(2, d);
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t k = 0; k < d; ++k) amp(q, k) = v[q * d + k];
    return BipartiteKet::normalize(std::move(amp));
  };
  return ChiPair{to_ket(ortho[0]), to_ket(ortho[1])};
}

double penalized_objective(std::span<const double> raw, double mu) {
  std::optional<ChiPair> pair;
  try {
    pair.emplace(decode_pair(raw));
  } catch (const Error&) {
    return kDegeneratePenalty;
  }
  const auto chi = combine(std::sqrt(0.5), pair->chi1, std::sqrt(0.5), pair->chi2).ket;
  const CatDensity rho = partial_trace_env(chi);
  const CatDensity rho1 = partial_trace_env(pair->chi1);
  const CatDensity rho2 = partial_trace_env(pair->chi2);
  const double c2 = trace_distance(rho, rho1);
  const double c3 = (bloch(rho2) + bloch(rho1)).length();
  const double objective = -bloch(rho1).z;
  if (mu == 0.0) return objective;
  return objective + mu * (c2 * c2 + c3 * c3);
}

OptimizationResult optimize(const OptimizerConfig& cfg) {
  cfg.validate();
  std::vector<Candidate> candidates(cfg.restarts);
  std::size_t workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.restarts);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.restarts; i = next++) candidates[i] = run_restart(cfg, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  const Candidate* best = &candidates.front();
  std::size_t iterations_total = 0;
  for (const auto& c : candidates) {
    iterations_total += c.iterations;
    if (better(c, *best)) best = &c;
  }

  const ChiPair pair = decode_pair(best->raw);
  const FeasibilityReport report =
      check_constraints(pair.chi1, pair.chi2, FeasibilityTolerances::uniform(cfg.tol_constraint));
  const CatDensity rho1 = partial_trace_env(pair.chi1);
  return OptimizationResult{
      .best_objective = bloch(rho1).z,
      .best_p_alive = p_alive(rho1),
      .chi1 = pair.chi1,
      .chi2 = pair.chi2,
      .report = report,
      .restart_index = best->restart_index,
      .iterations_total = iterations_total,
      .converged = best->feasible,
  };
}

std::vector<SweepRow> sweep_a(std::size_t steps) {
  if (steps < 2) throw Error("sweep: steps must be >= 2");
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double a = i + 1 == steps ? 2.0 : -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(steps - 1);
    const double l = lambda_from_overlap(OverlapA{a});
    rows.push_back({a, l, l * l, lambda_residual(l, OverlapA{a})});
  }
  return rows;
}

OracleReport sampling_oracle(std::size_t env_dim, std::size_t samples, std::uint64_t seed, double slack,
                             double feas_tol) {
  if (env_dim < 2) throw Error("sampling_oracle: env_dim must be >= 2");
  if (samples < 1) throw Error("sampling_oracle: samples must be >= 1");
  Rng rng(seed);
  const double bound = lambda_max_sq() + slack;
  OracleReport report;
  report.samples = samples;
  std::vector<double> raw(packed_size(env_dim));
  for (std::size_t s = 0; s < samples; ++s) {
    std::optional<ChiPair> pair;
    while (!pair) {
      const CVector a = random_unit(2 * env_dim, rng);
      const CVector b = random_unit(2 * env_dim, rng);
      for (std::size_t i = 0; i < 2 * env_dim; ++i) {
        raw[2 * i] = a[i].real();
        raw[2 * i + 1] = a[i].imag();
        raw[4 * env_dim + 2 * i] = b[i].real();
        raw[4 * env_dim + 2 * i + 1] = b[i].imag();
      }
      try {
        pair.emplace(decode_pair(raw));
      } catch (const LinearDependenceError&) {
      }
    }
    const BlochTriple p = bloch_triple(*pair);
    const double c2 = 0.5 * (p.chi - p.chi1).length();
    const double c3 = (p.chi1 + p.chi2).length();
    if (std::max(c2, c3) > feas_tol) continue;
    const double alive = p_alive(partial_trace_env(pair->chi1));
    ++report.feasible_count;
    report.max_feasible_p_alive = std::max(report.max_feasible_p_alive, alive);
    if (alive > bound) ++report.violations_of_bound;
  }
  return report;
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw DimensionError("nelder_mead: empty starting point");
  const double nd = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 1.0 / (2.0 * nd);
  const double shrink = 1.0 - 1.0 / nd;

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] = x0[i] != 0.0 ? (1.0 + options.initial_scale) * x0[i] : 5e-3 * options.initial_scale;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  SimplexResult out;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      p2[i] = std::move(pts[order[i]]);
      v2[i] = vals[order[i]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };
  auto simplex_size = [&] {
    double s = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) s = std::max(s, std::abs(pts[i][j] - pts[0][j]));
    return s;
  };
  auto affine = [&](double t, std::vector<double>& dst) {
    // centroid + t * (centroid - worst)
    for (std::size_t j = 0; j < n; ++j) dst[j] = centroid[j] + t * (centroid[j] - pts[n][j]);
  };

  sort_simplex();
  while (out.iterations < options.max_iters) {
    if (simplex_size() <= options.tol_step) {
      out.step_converged = true;
      break;
    }
    ++out.iterations;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / nd;

    affine(reflect, trial);
    const double fr = f(trial);
    if (fr < vals[0]) {
      affine(reflect * expand, trial2);
      const double fe = f(trial2);
      if (fe < fr) {
        pts[n] = trial2;
        vals[n] = fe;
      } else {
        pts[n] = trial;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = trial;
      vals[n] = fr;
    } else {
      const bool outside = fr < vals[n];
      affine(outside ? reflect * contract : -contract, trial2);
      const double fc = f(trial2);
      if (fc <= (outside ? fr : vals[n])) {
        pts[n] = trial2;
        vals[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[0][j] + shrink * (pts[i][j] - pts[0][j]);
          vals[i] = f(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  if (!out.step_converged && simplex_size() <= options.tol_step) out.step_converged = true;
  out.x = pts[0];
  out.value = vals[0];
  return out;
}

}  // namespace catbound
