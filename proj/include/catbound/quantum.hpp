#pragma once

// Pure states of a qubit (|1> alive, |2> dead) coupled to a d-dimensional
// environment, their reduced density matrices and Bloch vectors.

#include <array>
#include <cstddef>

#include "catbound/linalg.hpp"

namespace catbound {

/// amp(q, k) is the amplitude of |q> (x) |k>; row 0 is the alive branch.
class BipartiteKet {
 public:
  /// Accepts an already-normalized 2xd matrix (norm within 1e-12 of 1).
  static BipartiteKet from_amplitudes(CMatrix amp);
  /// Normalizes any nonzero 2xd matrix.
  static BipartiteKet normalize(CMatrix amp);

  std::size_t env_dim() const { return amp_.cols(); }
  const CMatrix& amp() const { return amp_; }
  CVector branch(std::size_t q) const { return amp_.row(q); }
  /// Flattened qubit-major vector of length 2d.
  CVector flat() const;

 private:
  explicit BipartiteKet(CMatrix amp) : amp_(std::move(amp)) {}
  CMatrix amp_;
};

struct CatDensity {
  std::array<Complex, 4> entries{};  // row-major 2x2

  Complex operator()(std::size_t q, std::size_t qp) const { return entries[2 * q + qp]; }
  Complex& operator()(std::size_t q, std::size_t qp) { return entries[2 * q + qp]; }

  static CatDensity diag(double alive, double dead);
  /// Throws Error unless Hermitian, unit trace and PSD within 1e-12.
  void validate() const;
  double purity() const;
  std::array<double, 2> eigenvalues() const;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double length() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator*(double s) const { return {s * x, s * y, s * z}; }
};

/// k = coeff_alive |qubit_vecs[0]>|env_vecs[0]> + coeff_dead |qubit_vecs[1]>|env_vecs[1]>.
/// qubit_vecs[0] is the Schmidt vector with the larger |<1|.>|^2.
struct SchmidtForm {
  double coeff_alive = 1.0;
  double coeff_dead = 0.0;
  std::array<CVector, 2> qubit_vecs;
  std::array<CVector, 2> env_vecs;
  bool rank_one = false;
};

BipartiteKet tensor(std::array<Complex, 2> qubit_amp, const CVector& env);

struct Combination {
  BipartiteKet ket;
  /// True when |a u + b v| differed from 1 by more than 1e-10 before renormalizing.
  bool norm_deviated = false;
  double raw_norm = 0.0;
};

Combination combine(Complex a, const BipartiteKet& u, Complex b, const BipartiteKet& v);

CatDensity partial_trace_env(const BipartiteKet& k);
/// Density matrix of a pure qubit state.
CatDensity pure_density(const CVector& qubit);

/// z = rho11 - rho22, x = 2 Re rho12, y = -2 Im rho12.
BlochVector bloch(const CatDensity& rho);
CatDensity from_bloch(const BlochVector& p);

double p_alive(const CatDensity& rho);
double p_dead(const CatDensity& rho);

SchmidtForm schmidt(const BipartiteKet& k);
BipartiteKet reconstruct(const SchmidtForm& form);

double trace_distance(const CatDensity& a, const CatDensity& b);

/// sqrt(1 - |<u|v>|^2); insensitive to global phase.
double ray_distance(const BipartiteKet& u, const BipartiteKet& v);
double ray_distance(const CVector& u, const CVector& v);

Complex inner(const BipartiteKet& u, const BipartiteKet& v);

}  // namespace catbound
