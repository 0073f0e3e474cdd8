#pragma once

// Small dense matrices over an arbitrary scalar ring (complex numbers or
// jets), with pivoted LU for determinants, solves and inverses.  Pivots are
// chosen by scalar_magnitude, which for a jet is the magnitude of its
// constant term.  Sizes here are tiny (ambient dimension <= 5).

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chgeo/scalar.hpp"

namespace chgeo {

template <class S>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  Mat(int rows, int cols, const S& init)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, init) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  S& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<S> a_;
};

template <class S>
struct Lu {
  Mat<S> lu;
  std::vector<int> piv;
  int sign = 1;
};

template <class S>
Lu<S> lu_factor(Mat<S> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("lu: square matrix required");
  const int n = m.rows();
  Lu<S> f{std::move(m), std::vector<int>(n), 1};
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = scalar_magnitude(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double mag = scalar_magnitude(f.lu(i, k));
      if (mag > best) {
        best = mag;
        p = i;
      }
    }
    if (!(best > 0.0)) throw std::domain_error("lu: singular matrix");
    f.piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      f.sign = -f.sign;
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) = f.lu(i, k) / f.lu(k, k);
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= f.lu(i, k) * f.lu(k, j);
    }
  }
  return f;
}

template <class S>
S lu_det(const Lu<S>& f) {
  const int n = f.lu.rows();
  S det = make_one_like(f.lu(0, 0));
  for (int k = 0; k < n; ++k) det = det * f.lu(k, k);
  if (f.sign < 0) det = det * cplx(-1.0);
  return det;
}

template <class S>
std::vector<S> lu_solve(const Lu<S>& f, std::vector<S> b) {
  const int n = f.lu.rows();
  for (int k = 0; k < n; ++k)
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) b[i] -= f.lu(i, j) * b[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= f.lu(i, j) * b[j];
    b[i] = b[i] / f.lu(i, i);
  }
  return b;
}

template <class S>
Mat<S> lu_inverse(const Lu<S>& f) {
  const int n = f.lu.rows();
  const S zero = make_zero_like(f.lu(0, 0));
  const S one = make_one_like(f.lu(0, 0));
  Mat<S> inv(n, n, zero);
  for (int col = 0; col < n; ++col) {
    std::vector<S> e(n, zero);
    e[col] = one;
    std::vector<S> x = lu_solve(f, std::move(e));
    for (int i = 0; i < n; ++i) inv(i, col) = x[i];
  }
  return inv;
}

// -- complex-only helpers -------------------------------------------------

inline double norm1(const Mat<cplx>& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double frobenius(const Mat<cplx>& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

inline double max_abs(const Mat<cplx>& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s = std::max(s, std::abs(m(i, j)));
  return s;
}

inline double hermitian_residual(const Mat<cplx>& m) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
std::vector<double> hermitian_eigenvalues(Mat<cplx> a);

}  // namespace chgeo
