#pragma once

// The cat-state construction: a pair of orthogonal kets chi1 (alive-leaning)
// and chi2 (dead-leaning) whose equal superposition chi has the same reduced
// density matrix as chi1, while chi2's Bloch vector is antipodal to chi1's.

#include <array>
#include <cmath>

#include "catbound/linalg.hpp"
#include "catbound/quantum.hpp"

namespace catbound {

class SingularConfigurationError : public Error {
 public:
  using Error::Error;
};

/// lambda_m = sqrt(1/2 + sqrt(2)/4), the largest attainable alive amplitude.
inline double lambda_max() { return std::sqrt(0.5 + std::sqrt(2.0) / 4.0); }
inline double lambda_max_sq() { return 0.5 + std::sqrt(2.0) / 4.0; }
/// sqrt(1 - lambda_m^2), evaluated without cancellation.
inline double lambda_max_complement() { return std::sqrt(0.5 - std::sqrt(2.0) / 4.0); }

/// Schmidt-form parameters of the pair
///   chi1 =   lambda |1>psi1 + sqrt(1-lambda^2) |2>psi2
///   chi2 = -(sqrt(1-lambda^2) |1>phi1 + lambda |2>phi2)
/// The overall -1 on chi2 is a global phase; it fixes the relative sign of the
/// two branches inside chi = (chi1 + chi2)/sqrt(2).
struct CatConfiguration {
  double lambda = 0.0;
  CVector psi1, psi2, phi1, phi2;

  /// Throws Error when lambda is outside [0,1], dimensions differ, or either
  /// pair is not orthonormal within 1e-12.
  void validate() const;
};

/// A = <psi1|phi1> + <phi1|psi1> = 2 Re<psi1|phi1>, in [-2, 2].
struct OverlapA {
  double value = 0.0;
};

struct ChiPair {
  BipartiteKet chi1;
  BipartiteKet chi2;
};

struct XiStates {
  CVector xi1;
  CVector xi2;
  double xi1_norm_residual = 0.0;
  double xi2_norm_residual = 0.0;
  double overlap_residual = 0.0;  // |<xi1|xi2>|
};

struct FeasibilityTolerances {
  double c1 = 1e-10;
  double c2 = 1e-10;
  double c3 = 1e-10;
  double model = 1e-10;

  static FeasibilityTolerances uniform(double t) { return {t, t, t, t}; }
};

struct FeasibilityReport {
  double c1_chi_overlap = 0.0;      // |<chi1|chi2>|
  double c2_rho_distance = 0.0;     // trace_distance(rho, rho1)
  double c3_bloch_antipodal = 0.0;  // |P(rho2) + P(rho1)|
  double eq3_residual = 0.0;        // |<phi1|psi1> + <phi2|psi2>|
  double eq9_residual = 0.0;        // |(1-l^2)<phi1|psi2> + l^2<psi1|phi2>|
  double xi_norm_residual = 0.0;    // max_i | |xi_i| - 1 |
  /// False when chi1 is rank-1 or a branch of chi2 vanishes in chi1's Schmidt
  /// frame; the three model residuals are then reported as 0 and ignored.
  bool model_defined = false;
  bool feasible = false;
};

ChiPair build_chi_pair(const CatConfiguration& cfg);

OverlapA overlap_a(const CatConfiguration& cfg);

/// Positive root of 2 l^2 + A l sqrt(1-l^2) - 1 = 0, strictly decreasing in A.
double lambda_from_overlap(OverlapA a);

/// Signed residual 2 l^2 + A l sqrt(1-l^2) - 1 of the normalization condition on xi1.
double lambda_residual(double lambda, OverlapA a);

/// Environment states of chi = lambda|1>xi1 + sqrt(1-lambda^2)|2>xi2.
/// Throws SingularConfigurationError for lambda in {0, 1}.
XiStates xi_states(const CatConfiguration& cfg);

FeasibilityReport check_constraints(const BipartiteKet& chi1, const BipartiteKet& chi2,
                                    const FeasibilityTolerances& tolerances = {});

struct OptimalTriple {
  BipartiteKet chi;
  BipartiteKet chi1;
  BipartiteKet chi2;
};

/// The optimal family for an arbitrary orthonormal environment pair:
///   chi  = l_m |1>psi1 - s_m |2>psi2
///   chi1 = l_m |1>psi1 + s_m |2>psi2
///   chi2 = s_m |1>psi1 - l_m |2>psi2
OptimalTriple construct_optimal(const CVector& psi1, const CVector& psi2);

/// The CatConfiguration that build_chi_pair maps onto construct_optimal:
/// lambda = lambda_m, phi1 = -psi1, phi2 = psi2.
CatConfiguration optimal_configuration(const CVector& psi1, const CVector& psi2);

/// Isolated-qubit analogue: |I>, |II> orthonormal and |III> = (|I> + |II>)/sqrt(2).
struct QubitTriplet {
  CVector one;
  CVector two;
  CVector three;
};

QubitTriplet qubit_triplet();

}  // namespace catbound
