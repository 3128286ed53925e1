#pragma once

// Dense complex kernels for a qubit (dimension 2) coupled to a small
// environment (dimension d, typically <= 64).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace catbound {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LinearDependenceError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kDependence = 1e-10;
inline constexpr double kSingular = 1e-14;
}  // namespace tol

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim);
  CVector(std::initializer_list<Complex> values);
  explicit CVector(std::vector<Complex> values);

  static CVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> entries() const { return data_; }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(Complex s);

  bool operator==(const CVector&) const = default;

 private:
  std::vector<Complex> data_;
};

CVector operator+(CVector a, const CVector& b);
CVector operator-(CVector a, const CVector& b);
CVector operator*(Complex s, CVector v);

/// Row-major dense matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  CVector row(std::size_t r) const;
  void set_row(std::size_t r, const CVector& v);
  CVector col(std::size_t c) const;

  std::span<const Complex> entries() const { return data_; }

  double frobenius_norm() const;
  CMatrix adjoint() const;

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);

bool is_finite(Complex z);
void require_finite(const CVector& v, const char* what);
void require_finite(const CMatrix& m, const char* what);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const CVector& a, const CVector& b);
double norm(const CVector& v);
CVector normalized(const CVector& v);

/// Orthonormalizes `vs` in order (modified Gram-Schmidt with one
/// reorthogonalization pass). Throws LinearDependenceError when a residual
/// norm drops below 1e-10.
std::vector<CVector> gram_schmidt(std::span<const CVector> vs);

/// m = left * diag(singular_values) * [right_rows[0]; right_rows[1]].
struct SVD2xd {
  CMatrix left;  // 2x2 unitary
  std::array<double, 2> singular_values{};
  std::array<CVector, 2> right_rows;

  CMatrix reconstruct() const;
};

/// Closed-form SVD of a 2xd matrix through the eigenproblem of m*m^dagger.
/// Right rows carry the phase convention: first nonzero component real and
/// non-negative.
SVD2xd svd_2xd(const CMatrix& m);

/// Haar-distributed unit vector (complex Gaussian, then normalized).
CVector random_unit(std::size_t d, Rng& rng);

/// Two Haar-random vectors of dimension d >= 2, orthonormalized.
std::array<CVector, 2> random_orthonormal_pair(std::size_t d, Rng& rng);

/// Deterministic 64-bit mixer used to derive independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

}  // namespace catbound
