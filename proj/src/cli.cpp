#include "catbound/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

namespace catbound {

namespace {

constexpr const char* kToolVersion = CATBOUND_VERSION;

class CheckList {
 public:
  void add(std::string name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    checks_.push_back({std::move(name), residual, tolerance, pass});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double max_abs_xy(const BlochVector& p) { return std::max(std::abs(p.x), std::abs(p.y)); }

double max_component(const BlochVector& p) {
  return std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
}

double density_violation(const CatDensity& rho) {
  const double herm = std::abs(rho(0, 1) - std::conj(rho(1, 0)));
  const double diag_im = std::max(std::abs(rho(0, 0).imag()), std::abs(rho(1, 1).imag()));
  const double trace = std::abs((rho(0, 0) + rho(1, 1)).real() - 1.0);
  const double neg = std::max(0.0, -rho.eigenvalues()[1]);
  return std::max({herm, diag_im, trace, neg});
}

double max_entry_diff(const CatDensity& a, const CatDensity& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
  return m;
}

double amp_diff(const BipartiteKet& a, const BipartiteKet& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.amp().entries().size(); ++i)
    s += std::norm(a.amp().entries()[i] - b.amp().entries()[i]);
  return std::sqrt(s);
}

BipartiteKet random_ket(std::size_t d, Rng& rng) {
  const CVector v = random_unit(2 * d, rng);
  CMatrix amp(2, d);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 0; k < d; ++k) amp(q, k) = v[q * d + k];
  return BipartiteKet::normalize(std::move(amp));
}

void optimal_family_checks(CheckList& checks, const std::string& tag, const CVector& psi1, const CVector& psi2) {
  const OptimalTriple t = construct_optimal(psi1, psi2);
  const CatDensity rho = partial_trace_env(t.chi);
  const CatDensity rho1 = partial_trace_env(t.chi1);
  const CatDensity rho2 = partial_trace_env(t.chi2);
  const BlochVector p = bloch(rho);
  const BlochVector p1 = bloch(rho1);
  const BlochVector p2 = bloch(rho2);
  const std::string sfx = tag.empty() ? "" : "_" + tag;

  checks.add("eq12_rho_equal" + sfx, trace_distance(rho, rho1), 1e-12);
  checks.add("optimal_bloch_antipodal" + sfx, max_component(p1 + p2), 1e-12);
  checks.add("optimal_bloch_diagonal" + sfx, std::max({max_abs_xy(p), max_abs_xy(p1), max_abs_xy(p2)}), 1e-12);
  checks.add("optimal_p_alive" + sfx, std::abs(p_alive(rho1) - lambda_max_sq()), 1e-10);
  checks.add("optimal_p_dead" + sfx, std::abs(p_dead(rho2) - lambda_max_sq()), 1e-10);
  const auto sum = combine(std::sqrt(0.5), t.chi1, std::sqrt(0.5), t.chi2);
  checks.add("optimal_superposition" + sfx, ray_distance(sum.ket, t.chi), 1e-12);
  checks.add("optimal_superposition_norm" + sfx, std::abs(sum.raw_norm - 1.0), 1e-12);

  const FeasibilityReport r = check_constraints(t.chi1, t.chi2, FeasibilityTolerances::uniform(1e-12));
  checks.add("optimal_chi_orthogonal" + sfx, r.c1_chi_overlap, 1e-12);
  checks.add("optimal_orthogonality_condition" + sfx, r.eq3_residual, 1e-12);
  checks.add("optimal_xi_orthogonality" + sfx, r.eq9_residual, 1e-12);
  checks.add("optimal_xi_normalization" + sfx, r.xi_norm_residual, 1e-12);
  checks.add("optimal_feasible" + sfx, r.feasible ? 0.0 : 1.0, 0.0);

  const CatConfiguration cfg = optimal_configuration(psi1, psi2);
  const ChiPair pair = build_chi_pair(cfg);
  checks.add("optimal_from_configuration" + sfx, std::max(amp_diff(pair.chi1, t.chi1), amp_diff(pair.chi2, t.chi2)),
             1e-12);
  checks.add("optimal_overlap_minimal" + sfx, std::abs(overlap_a(cfg).value + 2.0), 1e-12);
  const XiStates xi = xi_states(cfg);
  checks.add("optimal_xi_states" + sfx, std::max({xi.xi1_norm_residual, xi.xi2_norm_residual, xi.overlap_residual}),
             1e-12);
}

std::optional<std::string> write_output(const std::string& path, const std::string& content, std::ostream& out,
                                        std::ostream& err) {
  if (path == "-") {
    out << content;
    out.flush();
    return std::nullopt;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) return "cannot open output file: " + path;
  f << content;
  f.close();
  if (!f) return "failed writing output file: " + path;
  (void)err;
  return std::nullopt;
}

int emit(const std::string& path, const std::string& content, std::ostream& out, std::ostream& err) {
  if (auto msg = write_output(path, content, out, err)) {
    err << "catbound: " << *msg << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

Json checks_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["residual"] = c.residual;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::vector<Check> verification_suite(std::size_t env_dim, std::uint64_t seed) {
  if (env_dim < 2) throw Error("verify: --dim must be >= 2");
  CheckList checks;

  // Closed form and the lambda(A) table.
  const double l_m = lambda_from_overlap(OverlapA{-2.0});
  checks.add("lambda_max_closed_form", std::abs(l_m * l_m - (0.5 + std::sqrt(2.0) / 4.0)), 1e-12);
  const auto rows = sweep_a(1001);
  double worst = 0.0;
  double non_decreasing = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].residual));
    if (i > 0 && !(rows[i].lambda_sq < rows[i - 1].lambda_sq)) non_decreasing += 1.0;
  }
  checks.add("lambda_quadratic_self_consistency", worst, 1e-12);
  checks.add("lambda_sq_strictly_decreasing", non_decreasing, 0.0);
  checks.add("lambda_sq_span", std::abs(rows.front().lambda_sq - rows.back().lambda_sq - std::sqrt(2.0) / 2.0), 1e-12);

  // Optimal family: canonical basis pair and a seeded random pair.
  optimal_family_checks(checks, "", CVector::basis(env_dim, 0), CVector::basis(env_dim, 1));
  Rng rng(mix_seed(seed, 0));
  const auto pair = random_orthonormal_pair(env_dim, rng);
  optimal_family_checks(checks, "random", pair[0], pair[1]);

  // Isolated qubit.
  const QubitTriplet t = qubit_triplet();
  const BlochVector p1 = bloch(pure_density(t.one));
  const BlochVector p2 = bloch(pure_density(t.two));
  const BlochVector p3 = bloch(pure_density(t.three));
  const double half_root2 = std::sqrt(2.0) / 2.0;
  checks.add("triplet_orthogonal", std::abs(inner(t.one, t.two)), 1e-12);
  checks.add("triplet_antipodal", max_component(p1 + p2), 1e-12);
  checks.add("triplet_perpendicular", std::max(std::abs(p1.dot(p3)), std::abs(p2.dot(p3))), 1e-12);
  checks.add("triplet_unit_length",
             std::max({std::abs(p1.length() - 1.0), std::abs(p2.length() - 1.0), std::abs(p3.length() - 1.0)}),
             1e-12);
  checks.add("triplet_z_components",
             std::max({std::abs(p1.z - half_root2), std::abs(p2.z + half_root2), std::abs(p3.z - half_root2)}), 1e-12);
  checks.add("triplet_angle_45deg", std::abs(std::acos(p1.z / p1.length()) - M_PI / 4.0), 1e-9);
  checks.add("triplet_p_alive", std::abs(p_alive(pure_density(t.one)) - lambda_max_sq()), 1e-10);

  // Seeded property sweeps at this dimension.
  Rng krng(mix_seed(seed, 1));
  double roundtrip = 0.0, purity = 0.0, density = 0.0, spectrum = 0.0;
  for (int i = 0; i < 200; ++i) {
    const BipartiteKet k = random_ket(env_dim, krng);
    const SchmidtForm form = schmidt(k);
    roundtrip = std::max(roundtrip, amp_diff(reconstruct(form), k));
    const CatDensity rho = partial_trace_env(k);
    purity = std::max(purity, std::abs(rho.purity() - 0.5 * (1.0 + std::pow(bloch(rho).length(), 2))));
    density = std::max(density, density_violation(rho));
    const auto ev = rho.eigenvalues();
    const double hi = std::max(form.coeff_alive, form.coeff_dead);
    const double lo = std::min(form.coeff_alive, form.coeff_dead);
    spectrum = std::max({spectrum, std::abs(hi * hi - ev[0]), std::abs(lo * lo - ev[1])});
  }
  checks.add("schmidt_roundtrip", roundtrip, 1e-10);
  checks.add("purity_identity", purity, 1e-10);
  checks.add("partial_trace_density_invariants", density, 1e-12);
  checks.add("schmidt_matches_spectrum", spectrum, 1e-10);
  return checks.take();
}

std::vector<Check> state_file_checks(const Json& doc) {
  CheckList checks;
  if (doc.is_object() && doc.contains("states")) {
    const Json& states = doc["states"];
    const Json* reduced = doc.contains("reduced") ? &doc["reduced"] : nullptr;
    if (!states.is_object()) throw FormatError("bundle: states must be an object");
    static constexpr std::array<std::pair<const char*, const char*>, 3> names{
        {{"chi", "rho"}, {"chi1", "rho1"}, {"chi2", "rho2"}}};
    std::vector<BipartiteKet> kets;
    for (const auto& [ket_name, rho_name] : names) {
      if (!states.contains(ket_name)) throw FormatError(std::string("bundle: missing state ") + ket_name);
      kets.push_back(ket_from_json(states[ket_name]));
      const CatDensity rho = partial_trace_env(kets.back());
      checks.add(std::string("state_file_density_") + ket_name, density_violation(rho), 1e-12);
      if (reduced != nullptr && reduced->contains(rho_name)) {
        const CatDensity stored = density_from_json((*reduced)[rho_name]);
        checks.add(std::string("state_file_reduced_") + rho_name, max_entry_diff(rho, stored), 1e-12);
      }
    }
    if (kets[0].env_dim() != kets[1].env_dim() || kets[1].env_dim() != kets[2].env_dim())
      throw FormatError("bundle: states have different env_dim");
    const FeasibilityReport r = check_constraints(kets[1], kets[2], FeasibilityTolerances::uniform(1e-10));
    checks.add("state_file_feasible", r.feasible ? 0.0 : 1.0, 0.0);
    const auto sum = combine(std::sqrt(0.5), kets[1], std::sqrt(0.5), kets[2]);
    checks.add("state_file_superposition", ray_distance(sum.ket, kets[0]), 1e-10);
  } else {
    const BipartiteKet k = ket_from_json(doc);
    checks.add("state_file_density", density_violation(partial_trace_env(k)), 1e-12);
    checks.add("state_file_schmidt_roundtrip", amp_diff(reconstruct(schmidt(k)), k), 1e-10);
  }
  return checks.take();
}

Json construct_bundle(std::size_t env_dim, bool random_pair, std::uint64_t seed) {
  if (env_dim < 2) throw Error("construct: --dim must be >= 2");
  CVector psi1 = CVector::basis(env_dim, 0);
  CVector psi2 = CVector::basis(env_dim, 1);
  if (random_pair) {
    Rng rng(mix_seed(seed, 0));
    auto pair = random_orthonormal_pair(env_dim, rng);
    psi1 = std::move(pair[0]);
    psi2 = std::move(pair[1]);
  }
  const OptimalTriple t = construct_optimal(psi1, psi2);
  const std::array<std::pair<const char*, const BipartiteKet*>, 3> kets{
      {{"chi", &t.chi}, {"chi1", &t.chi1}, {"chi2", &t.chi2}}};

  Json states, reduced, blochs, probs;
  for (const auto& [name, ket] : kets) {
    const CatDensity rho = partial_trace_env(*ket);
    const std::string rho_name = std::string("rho") + (name + 3);
    states[name] = to_json(*ket);
    reduced[rho_name] = to_json(rho);
    blochs[rho_name] = to_json(bloch(rho));
    probs[name] = Json{{"p_alive", p_alive(rho)}, {"p_dead", p_dead(rho)}};
  }
  Json j;
  j["psi_source"] = random_pair ? "random" : "basis";
  j["lambda_m"] = lambda_max();
  j["states"] = std::move(states);
  j["reduced"] = std::move(reduced);
  j["bloch"] = std::move(blochs);
  j["probabilities"] = std::move(probs);
  j["report"] = to_json(check_constraints(t.chi1, t.chi2));
  return j;
}

Json manifest(const std::string& subcommand, const Json& parameters, std::uint64_t seed) {
  Json j;
  j["subcommand"] = subcommand;
  j["parameters"] = parameters;
  j["tool_version"] = kToolVersion;
  j["timestamp"] = utc_timestamp();
  j["master_seed"] = seed;
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-paradoxical cat states: verification, lambda(A) sweep, optimizer, constructor", "catbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::uint64_t seed = 0;
  std::string out_path = "-";

  auto* verify = app.add_subcommand("verify", "Run the property suite; exit 0 iff every check passes");
  std::size_t verify_dim = 2;
  std::string state_file;
  verify->add_option("--dim", verify_dim, "Environment dimension (>= 2)");
  verify->add_option("--seed", seed, "Seed for random environment pairs and kets");
  verify->add_option("--state-file", state_file, "Ket or construct bundle (JSON) to check");
  verify->add_option("--out", out_path, "Output path, '-' for stdout");

  auto* sweep = app.add_subcommand("sweep", "Tabulate lambda(A) over A in [-2, 2]");
  std::size_t steps = 101;
  std::string format = "csv";
  sweep->add_option("--steps", steps, "Grid points (>= 2)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out_path, "Output path, '-' for stdout");

  auto* opt = app.add_subcommand("optimize", "Maximize the alive probability under the cat constraints");
  OptimizerConfig ocfg;
  long long restarts = static_cast<long long>(ocfg.restarts);
  long long opt_dim = static_cast<long long>(ocfg.env_dim);
  opt->add_option("--dim", opt_dim, "Environment dimension (2..64)");
  opt->add_option("--restarts", restarts, "Independent random restarts (>= 1)");
  opt->add_option("--seed", seed, "Master seed");
  opt->add_option("--tol-constraint", ocfg.tol_constraint, "Feasibility tolerance on every residual");
  opt->add_option("--threads", ocfg.threads, "Worker threads, 0 = hardware concurrency");
  opt->add_option("--out", out_path, "Output path, '-' for stdout");

  auto* cons = app.add_subcommand("construct", "Emit the optimal state triple with reduced matrices and Bloch vectors");
  long long cons_dim = 2;
  bool basis = false;
  cons->add_option("--dim", cons_dim, "Environment dimension (>= 2)");
  auto* cons_seed = cons->add_option("--seed", seed, "Use a seeded random orthonormal environment pair");
  auto* cons_basis = cons->add_flag("--basis", basis, "Use the first two canonical basis vectors (default)");
  cons_seed->excludes(cons_basis);
  cons->add_option("--out", out_path, "Output path, '-' for stdout");

  std::vector<std::string> argv_store{"catbound"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      Json params{{"dim", verify_dim}, {"seed", seed}, {"state_file", state_file}};
      std::vector<Check> checks;
      try {
        if (!state_file.empty()) {
          std::ifstream f(state_file);
          if (!f) {
            err << "catbound: cannot read state file: " << state_file << "\n";
            return kExitUsage;
          }
          const Json doc = Json::parse(f);
          checks = state_file_checks(doc);
        }
      } catch (const Json::exception& e) {
        err << "catbound: malformed state file: " << e.what() << "\n";
        return kExitUsage;
      } catch (const Error& e) {
        err << "catbound: malformed state file: " << e.what() << "\n";
        return kExitUsage;
      }
      if (verify_dim < 2) {
        err << "catbound: verify --dim must be >= 2\n";
        return kExitUsage;
      }
      auto suite = verification_suite(verify_dim, seed);
      checks.insert(checks.end(), suite.begin(), suite.end());
      const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
      Json doc;
      doc["manifest"] = manifest("verify", params, seed);
      doc["checks"] = checks_json(checks);
      doc["all_passed"] = all;
      const int io = emit(out_path, doc.dump(2) + "\n", out, err);
      if (io != kExitOk) return io;
      return all ? kExitOk : kExitCheckFailed;
    }

    if (sweep->parsed()) {
      if (steps < 2) {
        err << "catbound: sweep --steps must be >= 2\n";
        return kExitUsage;
      }
      const auto rows = sweep_a(steps);
      if (format == "csv") return emit(out_path, sweep_csv(rows), out, err);
      Json doc;
      doc["manifest"] = manifest("sweep", Json{{"steps", steps}, {"format", format}}, seed);
      doc["rows"] = to_json(rows);
      return emit(out_path, doc.dump(2) + "\n", out, err);
    }

    if (opt->parsed()) {
      if (restarts < 1 || opt_dim < 2 || opt_dim > 64) {
        err << "catbound: optimize requires --restarts >= 1 and 2 <= --dim <= 64\n";
        return kExitUsage;
      }
      ocfg.restarts = static_cast<std::size_t>(restarts);
      ocfg.env_dim = static_cast<std::size_t>(opt_dim);
      ocfg.master_seed = seed;
      try {
        ocfg.validate();
      } catch (const Error& e) {
        err << "catbound: " << e.what() << "\n";
        return kExitUsage;
      }
      const OptimizationResult result = optimize(ocfg);
      Json params{{"dim", ocfg.env_dim},
                  {"restarts", ocfg.restarts},
                  {"seed", seed},
                  {"tol_constraint", ocfg.tol_constraint},
                  {"penalty_init", ocfg.penalty_init},
                  {"penalty_growth", ocfg.penalty_growth},
                  {"penalty_rounds", ocfg.penalty_rounds},
                  {"multiplier_rounds", ocfg.multiplier_rounds},
                  {"max_iters_per_round", ocfg.max_iters_per_round},
                  {"tol_step", ocfg.tol_step}};
      Json doc;
      doc["manifest"] = manifest("optimize", params, seed);
      doc["result"] = to_json(result);
      const int io = emit(out_path, doc.dump(2) + "\n", out, err);
      if (io != kExitOk) return io;
      return result.converged ? kExitOk : kExitNotConverged;
    }

    if (cons->parsed()) {
      if (cons_dim < 2) {
        err << "catbound: construct --dim must be >= 2\n";
        return kExitUsage;
      }
      const bool random_pair = cons_seed->count() > 0;
      Json doc;
      doc["manifest"] = manifest(
          "construct", Json{{"dim", cons_dim}, {"basis", !random_pair}, {"seed", seed}}, seed);
      const Json bundle = construct_bundle(static_cast<std::size_t>(cons_dim), random_pair, seed);
      for (const auto& [k, v] : bundle.items()) doc[k] = v;
      return emit(out_path, doc.dump(2) + "\n", out, err);
    }
  } catch (const Error& e) {
    err << "catbound: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace catbound
