#include "catbound/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace catbound {

namespace {

void require_ket_shape(const CMatrix& amp) {
  if (amp.rows() != 2 || amp.cols() < 1)
    throw DimensionError("bipartite ket: amplitude matrix must be 2xd with d >= 1");
  require_finite(amp, "bipartite ket");
}

}  // namespace

BipartiteKet BipartiteKet::from_amplitudes(CMatrix amp) {
  require_ket_shape(amp);
  const double n = amp.frobenius_norm();
  if (std::abs(n - 1.0) > tol::kAlgebraic)
    throw Error("bipartite ket: norm " + std::to_string(n) + " is not 1");
  return BipartiteKet(std::move(amp));
}

BipartiteKet BipartiteKet::normalize(CMatrix amp) {
  require_ket_shape(amp);
  const double n = amp.frobenius_norm();
  if (n <= tol::kAlgebraic) throw Error("bipartite ket: zero vector cannot be normalized");
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 0; k < amp.cols(); ++k) amp(q, k) /= n;
  return BipartiteKet(std::move(amp));
}

CVector BipartiteKet::flat() const { return CVector(std::vector<Complex>(amp_.entries().begin(), amp_.entries().end())); }

CatDensity CatDensity::diag(double alive, double dead) {
  CatDensity rho;
  rho(0, 0) = alive;
  rho(1, 1) = dead;
  return rho;
}

void CatDensity::validate() const {
  for (const auto& z : entries)
    if (!is_finite(z)) throw NonFiniteError("density matrix: non-finite entry");
  if (std::abs((*this)(0, 1) - std::conj((*this)(1, 0))) > tol::kAlgebraic ||
      std::abs((*this)(0, 0).imag()) > tol::kAlgebraic ||
      std::abs((*this)(1, 1).imag()) > tol::kAlgebraic)
    throw Error("density matrix: not Hermitian");
  const double tr = ((*this)(0, 0) + (*this)(1, 1)).real();
  if (std::abs(tr - 1.0) > tol::kAlgebraic) throw Error("density matrix: trace is not 1");
  if (eigenvalues()[1] < -tol::kAlgebraic) throw Error("density matrix: not positive semidefinite");
}

double CatDensity::purity() const {
  double s = 0.0;
  for (const auto& z : entries) s += std::norm(z);
  return s;
}

std::array<double, 2> CatDensity::eigenvalues() const {
  const double a = (*this)(0, 0).real();
  const double c = (*this)(1, 1).real();
  const double r = std::hypot(0.5 * (a - c), std::abs((*this)(0, 1)));
  return {0.5 * (a + c) + r, 0.5 * (a + c) - r};
}

double BlochVector::length() const { return std::sqrt(x * x + y * y + z * z); }

BipartiteKet tensor(std::array<Complex, 2> qubit_amp, const CVector& env) {
  require_finite(env, "tensor");
  if (env.dim() < 1) throw DimensionError("tensor: empty environment vector");
  CMatrix amp(2, env.dim());
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 0; k < env.dim(); ++k) amp(q, k) = qubit_amp[q] * env[k];
  if (amp.frobenius_norm() <= tol::kAlgebraic) throw Error("tensor: zero product state");
  return BipartiteKet::normalize(std::move(amp));
}

Combination combine(Complex a, const BipartiteKet& u, Complex b, const BipartiteKet& v) {
  if (u.env_dim() != v.env_dim()) throw DimensionError("combine: environment dimensions differ");
  CMatrix amp(2, u.env_dim());
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 0; k < u.env_dim(); ++k) amp(q, k) = a * u.amp()(q, k) + b * v.amp()(q, k);
  const double n = amp.frobenius_norm();
  if (n <= tol::kAlgebraic) throw Error("combine: superposition vanishes");
  return Combination{BipartiteKet::normalize(std::move(amp)), std::abs(n - 1.0) > tol::kReconstruction, n};
}

CatDensity partial_trace_env(const BipartiteKet& k) {
  CatDensity rho;
  const CMatrix& amp = k.amp();
  for (std::size_t q = 0; q < 2; ++q) {
    for (std::size_t qp = q; qp < 2; ++qp) {
      Complex s = 0.0;
      for (std::size_t e = 0; e < k.env_dim(); ++e) s += amp(q, e) * std::conj(amp(qp, e));
      rho(q, qp) = s;
    }
  }
  // Exact Hermiticity and real diagonal by construction.
  rho(0, 0) = rho(0, 0).real();
  rho(1, 1) = rho(1, 1).real();
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

CatDensity pure_density(const CVector& qubit) {
  if (qubit.dim() != 2) throw DimensionError("pure_density: qubit state must have dimension 2");
  CMatrix amp(2, 1);
  amp(0, 0) = qubit[0];
  amp(1, 0) = qubit[1];
  return partial_trace_env(BipartiteKet::normalize(std::move(amp)));
}

BlochVector bloch(const CatDensity& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

CatDensity from_bloch(const BlochVector& p) {
  CatDensity rho;
  rho(0, 0) = 0.5 * (1.0 + p.z);
  rho(1, 1) = 0.5 * (1.0 - p.z);
  rho(0, 1) = Complex(0.5 * p.x, -0.5 * p.y);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

double p_alive(const CatDensity& rho) { return std::clamp(rho(0, 0).real(), 0.0, 1.0); }

double p_dead(const CatDensity& rho) { return std::clamp(rho(1, 1).real(), 0.0, 1.0); }

SchmidtForm schmidt(const BipartiteKet& k) {
  const SVD2xd svd = svd_2xd(k.amp());
  // Labeling: the qubit vector with larger alive weight carries coeff_alive;
  // a tie keeps the SVD order (descending singular value).
  std::size_t alive = 0;
  const double w0 = std::norm(svd.left(0, 0));
  const double w1 = std::norm(svd.left(0, 1));
  if (w1 > w0 + tol::kAlgebraic) alive = 1;
  const std::size_t dead = 1 - alive;

  SchmidtForm form;
  form.coeff_alive = std::clamp(svd.singular_values[alive], 0.0, 1.0);
  form.coeff_dead = std::sqrt(std::max(0.0, 1.0 - form.coeff_alive * form.coeff_alive));
  form.qubit_vecs = {svd.left.col(alive), svd.left.col(dead)};
  form.env_vecs = {svd.right_rows[alive], svd.right_rows[dead]};
  form.rank_one = svd.singular_values[1] == 0.0;
  return form;
}

BipartiteKet reconstruct(const SchmidtForm& form) {
  const std::size_t d = form.env_vecs[0].dim();
  CMatrix amp(2, d);
  const std::array<double, 2> coeff{form.coeff_alive, form.coeff_dead};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t e = 0; e < d; ++e)
        amp(q, e) += coeff[i] * form.qubit_vecs[i][q] * form.env_vecs[i][e];
  return BipartiteKet::normalize(std::move(amp));
}

double trace_distance(const CatDensity& a, const CatDensity& b) {
  // a - b is traceless Hermitian with eigenvalues +-r.
  const Complex da = a(0, 0) - b(0, 0);
  const Complex dd = a(1, 1) - b(1, 1);
  const Complex off = a(0, 1) - b(0, 1);
  const double half_gap = 0.5 * (da - dd).real();
  const double shift = 0.5 * (da + dd).real();
  const double r = std::hypot(half_gap, std::abs(off));
  return 0.5 * (std::abs(shift + r) + std::abs(shift - r));
}

Complex inner(const BipartiteKet& u, const BipartiteKet& v) { return inner(u.flat(), v.flat()); }

double ray_distance(const CVector& u, const CVector& v) {
  // 1 - c^2 = (|u - e^{i theta} v|^2 / 2)(1 + c) with c = |<u|v>|; the
  // aligned difference avoids cancellation for nearly equal rays.
  const Complex overlap = inner(v, u);
  const double c = std::abs(overlap);
  const Complex phase = c > 0.0 ? overlap / c : Complex(1.0);
  const double diff = norm(u - phase * v);
  return diff * std::sqrt(0.5 * (1.0 + std::min(c, 1.0)));
}

double ray_distance(const BipartiteKet& u, const BipartiteKet& v) {
  return ray_distance(u.flat(), v.flat());
}

}  // namespace catbound
