#include "catbound/catmodel.hpp"

#include <algorithm>
#include <cmath>

namespace catbound {

namespace {

void require_orthonormal_pair(const CVector& a, const CVector& b, const char* what) {
  if (a.dim() != b.dim()) throw DimensionError(std::string(what) + ": dimension mismatch");
  require_finite(a, what);
  require_finite(b, what);
  if (std::abs(norm(a) - 1.0) > tol::kAlgebraic || std::abs(norm(b) - 1.0) > tol::kAlgebraic ||
      std::abs(inner(a, b)) > tol::kAlgebraic)
    throw Error(std::string(what) + ": pair is not orthonormal");
}

BipartiteKet two_branch_ket(Complex alive, const CVector& alive_env, Complex dead,
                            const CVector& dead_env) {
  CMatrix amp(2, alive_env.dim());
  for (std::size_t k = 0; k < alive_env.dim(); ++k) {
    amp(0, k) = alive * alive_env[k];
    amp(1, k) = dead * dead_env[k];
  }
  return BipartiteKet::normalize(std::move(amp));
}

// Branch q of `k` in the qubit basis given by `frame` (columns = basis kets).
CVector branch_in_frame(const BipartiteKet& k, const std::array<CVector, 2>& frame, std::size_t q) {
  CVector out(k.env_dim());
  for (std::size_t e = 0; e < k.env_dim(); ++e)
    out[e] = std::conj(frame[q][0]) * k.amp()(0, e) + std::conj(frame[q][1]) * k.amp()(1, e);
  return out;
}

XiStates xi_states_unchecked(const CatConfiguration& cfg) {
  const double l = cfg.lambda;
  const double s = std::sqrt(std::max(0.0, 1.0 - l * l));
  if (l < tol::kSingular || s < tol::kSingular)
    throw SingularConfigurationError("xi_states: lambda must lie strictly inside (0, 1)");
  XiStates xi;
  xi.xi1 = std::sqrt(0.5) * cfg.psi1 - (s / (std::sqrt(2.0) * l)) * cfg.phi1;
  xi.xi2 = std::sqrt(0.5) * cfg.psi2 - (l / (std::sqrt(2.0) * s)) * cfg.phi2;
  xi.xi1_norm_residual = std::abs(norm(xi.xi1) - 1.0);
  xi.xi2_norm_residual = std::abs(norm(xi.xi2) - 1.0);
  xi.overlap_residual = std::abs(inner(xi.xi1, xi.xi2));
  return xi;
}

}  // namespace

void CatConfiguration::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0)
    throw Error("cat configuration: lambda must lie in [0, 1]");
  require_orthonormal_pair(psi1, psi2, "cat configuration (psi)");
  require_orthonormal_pair(phi1, phi2, "cat configuration (phi)");
  if (psi1.dim() != phi1.dim()) throw DimensionError("cat configuration: psi and phi dimensions differ");
}

ChiPair build_chi_pair(const CatConfiguration& cfg) {
  cfg.validate();
  const double l = cfg.lambda;
  const double s = std::sqrt(std::max(0.0, 1.0 - l * l));
  return ChiPair{two_branch_ket(l, cfg.psi1, s, cfg.psi2), two_branch_ket(-s, cfg.phi1, -l, cfg.phi2)};
}

OverlapA overlap_a(const CatConfiguration& cfg) {
  cfg.validate();
  double a = 2.0 * inner(cfg.psi1, cfg.phi1).real();
  if (std::abs(a) > 2.0 && std::abs(a) - 2.0 <= tol::kAlgebraic) a = std::copysign(2.0, a);
  return OverlapA{a};
}

double lambda_from_overlap(OverlapA a) {
  if (!std::isfinite(a.value) || std::abs(a.value) > 2.0 + tol::kAlgebraic)
    throw Error("lambda_from_overlap: A must lie in [-2, 2]");
  const double v = std::clamp(a.value, -2.0, 2.0);
  return std::sqrt(0.5 - v / (2.0 * std::sqrt(4.0 + v * v)));
}

double lambda_residual(double lambda, OverlapA a) {
  const double s = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
  return 2.0 * lambda * lambda + a.value * lambda * s - 1.0;
}

XiStates xi_states(const CatConfiguration& cfg) {
  cfg.validate();
  return xi_states_unchecked(cfg);
}

FeasibilityReport check_constraints(const BipartiteKet& chi1, const BipartiteKet& chi2,
                                    const FeasibilityTolerances& tolerances) {
  if (chi1.env_dim() != chi2.env_dim())
    throw DimensionError("check_constraints: environment dimensions differ");

  FeasibilityReport r;
  const auto chi = combine(std::sqrt(0.5), chi1, std::sqrt(0.5), chi2).ket;
  const CatDensity rho = partial_trace_env(chi);
  const CatDensity rho1 = partial_trace_env(chi1);
  const CatDensity rho2 = partial_trace_env(chi2);

  r.c1_chi_overlap = std::abs(inner(chi1, chi2));
  r.c2_rho_distance = trace_distance(rho, rho1);
  r.c3_bloch_antipodal = (bloch(rho2) + bloch(rho1)).length();

  // In chi1's Schmidt frame chi1 has the exact two-branch form, so psi and
  // lambda are read off directly and phi from chi2's branches.
  const SchmidtForm form = schmidt(chi1);
  const double l = form.coeff_alive;
  if (!form.rank_one && l > tol::kAlgebraic && form.coeff_dead > tol::kAlgebraic) {
    const CVector b1 = branch_in_frame(chi2, form.qubit_vecs, 0);
    const CVector b2 = branch_in_frame(chi2, form.qubit_vecs, 1);
    const double n1 = norm(b1);
    const double n2 = norm(b2);
    if (n1 > tol::kAlgebraic && n2 > tol::kAlgebraic) {
      CatConfiguration cfg{l, form.env_vecs[0], form.env_vecs[1], (-1.0 / n1) * b1, (-1.0 / n2) * b2};
      const XiStates xi = xi_states_unchecked(cfg);
      r.eq3_residual = std::abs(inner(cfg.phi1, cfg.psi1) + inner(cfg.phi2, cfg.psi2));
      r.eq9_residual =
          std::abs((1.0 - l * l) * inner(cfg.phi1, cfg.psi2) + l * l * inner(cfg.psi1, cfg.phi2));
      r.xi_norm_residual = std::max(xi.xi1_norm_residual, xi.xi2_norm_residual);
      r.model_defined = true;
    }
  }

  r.feasible = r.c1_chi_overlap <= tolerances.c1 && r.c2_rho_distance <= tolerances.c2 &&
               r.c3_bloch_antipodal <= tolerances.c3;
  if (r.model_defined) {
    r.feasible = r.feasible && r.eq3_residual <= tolerances.model &&
                 r.eq9_residual <= tolerances.model && r.xi_norm_residual <= tolerances.model;
  }
  return r;
}

OptimalTriple construct_optimal(const CVector& psi1, const CVector& psi2) {
  if (psi1.dim() < 2) throw DimensionError("construct_optimal: environment dimension must be >= 2");
  require_orthonormal_pair(psi1, psi2, "construct_optimal");
  const double l = lambda_max();
  const double s = lambda_max_complement();
  return OptimalTriple{two_branch_ket(l, psi1, -s, psi2), two_branch_ket(l, psi1, s, psi2),
                       two_branch_ket(s, psi1, -l, psi2)};
}

CatConfiguration optimal_configuration(const CVector& psi1, const CVector& psi2) {
  return CatConfiguration{lambda_max(), psi1, psi2, -1.0 * psi1, psi2};
}

QubitTriplet qubit_triplet() {
  const double l = lambda_max();
  const double s = lambda_max_complement();
  QubitTriplet t;
  t.one = CVector{l, s};
  t.two = CVector{s, -l};
  t.three = std::sqrt(0.5) * (t.one + t.two);
  return t;
}

}  // namespace catbound
