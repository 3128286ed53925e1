#include "catbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace catbound {

namespace {

constexpr double kPhaseThreshold = 1e-12;

void check_same_dim(const CVector& a, const CVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

// (re, im) lexicographic comparison, component by component.
bool lexicographically_greater(const CVector& a, const CVector& b) {
  for (std::size_t k = 0; k < a.dim(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() > b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() > b[k].imag();
  }
  return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Lowest-index basis vector, projected orthogonal to `v` and normalized.
CVector orthogonal_complement_vector(const CVector& v) {
  for (std::size_t k = 0; k < v.dim(); ++k) {
    CVector e = CVector::basis(v.dim(), k);
    e -= inner(v, e) * v;
    const double n = norm(e);
    if (n > tol::kDependence) return (1.0 / n) * e;
  }
  return CVector(v.dim());
}

}  // namespace

CVector::CVector(std::size_t dim) : data_(dim) {}

CVector::CVector(std::initializer_list<Complex> values) : data_(values) {}

CVector::CVector(std::vector<Complex> values) : data_(std::move(values)) {}

CVector CVector::basis(std::size_t dim, std::size_t index) {
  CVector e(dim);
  e[index] = 1.0;
  return e;
}

CVector& CVector::operator+=(const CVector& other) {
  check_same_dim(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  check_same_dim(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CVector& CVector::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CVector operator+(CVector a, const CVector& b) { return a += b; }
CVector operator-(CVector a, const CVector& b) { return a -= b; }
CVector operator*(Complex s, CVector v) { return v *= s; }

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CVector CMatrix::row(std::size_t r) const {
  return CVector(std::vector<Complex>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)));
}

void CMatrix::set_row(std::size_t r, const CVector& v) {
  if (v.dim() != cols_) throw DimensionError("set_row: dimension mismatch");
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = v[c];
}

CVector CMatrix::col(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference: shape mismatch");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const CVector& v, const char* what) {
  for (const auto& z : v)
    if (!is_finite(z)) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

void require_finite(const CMatrix& m, const char* what) {
  for (const auto& z : m.entries())
    if (!is_finite(z)) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

Complex inner(const CVector& a, const CVector& b) {
  check_same_dim(a, b, "inner");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const CVector& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

CVector normalized(const CVector& v) {
  const double n = norm(v);
  if (n < tol::kDependence) throw LinearDependenceError("normalized: zero vector");
  return (1.0 / n) * v;
}

std::vector<CVector> gram_schmidt(std::span<const CVector> vs) {
  std::vector<CVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    if (!out.empty()) check_same_dim(out.front(), v, "gram_schmidt");
    require_finite(v, "gram_schmidt");
    CVector w = v;
    // Two passes keep the output orthonormal to ~1e-15 even for nearly
    // dependent inputs.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) w -= inner(q, w) * q;
    const double n = norm(w);
    if (n < tol::kDependence) {
      throw LinearDependenceError("gram_schmidt: input " + std::to_string(out.size()) +
                                  " is linearly dependent on its predecessors");
    }
    out.push_back((1.0 / n) * w);
  }
  return out;
}

CMatrix SVD2xd::reconstruct() const {
  const std::size_t d = right_rows[0].dim();
  CMatrix m(2, d);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t k = 0; k < d; ++k)
      m(q, k) = left(q, 0) * singular_values[0] * right_rows[0][k] +
                left(q, 1) * singular_values[1] * right_rows[1][k];
  return m;
}

SVD2xd svd_2xd(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() < 1)
    throw DimensionError("svd_2xd: expected a 2xd matrix with d >= 1");
  require_finite(m, "svd_2xd");
  const std::size_t d = m.cols();

  // H = m m^dagger = [[a, b], [conj(b), c]].
  double a = 0.0;
  double c = 0.0;
  Complex b = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    a += std::norm(m(0, k));
    c += std::norm(m(1, k));
    b += m(0, k) * std::conj(m(1, k));
  }
  const double half_gap = 0.5 * (a - c);
  const double radius = std::hypot(half_gap, std::abs(b));
  const double top = 0.5 * (a + c) + radius;

  std::array<Complex, 2> u1;
  if (std::abs(b) <= tol::kSingular * std::max(1.0, a + c)) {
    u1 = (a >= c) ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
  } else {
    // Both candidates solve (H - top) u = 0; keep the better-conditioned one.
    std::array<Complex, 2> v{b, top - a};
    std::array<Complex, 2> w{top - c, std::conj(b)};
    const double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
    const double nw = std::hypot(std::abs(w[0]), std::abs(w[1]));
    u1 = nv >= nw ? std::array<Complex, 2>{v[0] / nv, v[1] / nv}
                  : std::array<Complex, 2>{w[0] / nw, w[1] / nw};
  }
  std::array<Complex, 2> u2{-std::conj(u1[1]), std::conj(u1[0])};

  auto project = [&](const std::array<Complex, 2>& u) {
    CVector r(d);
    for (std::size_t k = 0; k < d; ++k) r[k] = std::conj(u[0]) * m(0, k) + std::conj(u[1]) * m(1, k);
    return r;
  };

  SVD2xd out;
  out.left = CMatrix(2, 2);
  CVector r1 = project(u1);
  CVector r2 = project(u2);
  double s1 = norm(r1);

  if (s1 < tol::kSingular) {
    // Zero matrix: any orthonormal pair works.
    out.singular_values = {0.0, 0.0};
    out.right_rows[0] = CVector::basis(d, 0);
    out.right_rows[1] = d >= 2 ? CVector::basis(d, 1) : CVector(d);
    out.left(0, 0) = 1.0;
    out.left(1, 1) = 1.0;
    return out;
  }
  r1 *= 1.0 / s1;
  r2 -= inner(r1, r2) * r1;
  double s2 = norm(r2);
  if (s2 < tol::kSingular) {
    s2 = 0.0;
    r2 = orthogonal_complement_vector(r1);
  } else {
    r2 *= 1.0 / s2;
  }
  if (s2 > s1) {
    std::swap(s1, s2);
    std::swap(r1, r2);
    std::swap(u1, u2);
  }

  std::array<CVector, 2> rows{std::move(r1), std::move(r2)};
  std::array<std::array<Complex, 2>, 2> cols{u1, u2};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double mag = std::abs(rows[i][k]);
      if (mag > kPhaseThreshold) {
        const Complex phase = rows[i][k] / mag;
        rows[i] *= std::conj(phase);
        rows[i][k] = mag;
        cols[i][0] *= phase;
        cols[i][1] *= phase;
        break;
      }
    }
  }
  if (std::abs(s1 - s2) <= tol::kSingular && lexicographically_greater(rows[1], rows[0])) {
    std::swap(rows[0], rows[1]);
    std::swap(cols[0], cols[1]);
    std::swap(s1, s2);
  }

  out.singular_values = {s1, s2};
  out.right_rows = std::move(rows);
  for (std::size_t i = 0; i < 2; ++i) {
    out.left(0, i) = cols[i][0];
    out.left(1, i) = cols[i][1];
  }
  return out;
}

CVector random_unit(std::size_t d, Rng& rng) {
  if (d < 1) throw DimensionError("random_unit: d must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    CVector v(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[k] = Complex(re, im);
    }
    const double n = norm(v);
    if (n > tol::kDependence) return (1.0 / n) * v;
  }
}

std::array<CVector, 2> random_orthonormal_pair(std::size_t d, Rng& rng) {
  if (d < 2) throw DimensionError("random_orthonormal_pair: d must be >= 2");
  for (;;) {
    const std::array<CVector, 2> raw{random_unit(d, rng), random_unit(d, rng)};
    try {
      const auto q = gram_schmidt(raw);
      return {q[0], q[1]};
    } catch (const LinearDependenceError&) {
    }
  }
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace catbound
