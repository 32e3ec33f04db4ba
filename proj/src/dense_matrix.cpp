// SPDX-License-Identifier: Apache-2.0

#include "krb/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "krb/errors.hpp"

namespace krb {

DenseMatrix::DenseMatrix(std::size_t nrows, std::size_t ncols, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), values_(std::move(values)) {
  if (values_.size() != nrows_ * ncols_) {
    throw DimensionMismatch("DenseMatrix: value count does not match shape");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector> &cols) {
  if (cols.empty()) return DenseMatrix(0, 0);
  const std::size_t n = cols.front().size();
  DenseMatrix A(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != n) throw DimensionMismatch("from_columns: ragged column lengths");
    A.set_column(j, cols[j]);
  }
  return A;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector v(nrows_);
  std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(j * nrows_), nrows_, v.begin());
  return v;
}

void DenseMatrix::set_column(std::size_t j, const Vector &v) {
  if (v.size() != nrows_) throw DimensionMismatch("set_column: length mismatch");
  std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(j * nrows_));
}

DenseMatrix DenseMatrix::top_left(std::size_t nrows, std::size_t ncols) const {
  if (nrows > nrows_ || ncols > ncols_) throw DimensionMismatch("top_left: block too large");
  DenseMatrix B(nrows, ncols);
  for (std::size_t j = 0; j < ncols; ++j)
    for (std::size_t i = 0; i < nrows; ++i) B(i, j) = (*this)(i, j);
  return B;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Vector dense_matvec(const DenseMatrix &A, const Vector &x) {
  if (A.ncols() != x.size()) throw DimensionMismatch("dense_matvec: shape mismatch");
  Vector y(A.nrows(), 0.0);
  for (std::size_t j = 0; j < A.ncols(); ++j) {
    const double xj = x[j];
    for (std::size_t i = 0; i < A.nrows(); ++i) y[i] += A(i, j) * xj;
  }
  return y;
}

Vector dense_matvec_transpose(const DenseMatrix &A, const Vector &x) {
  if (A.nrows() != x.size()) throw DimensionMismatch("dense_matvec_transpose: shape mismatch");
  Vector y(A.ncols(), 0.0);
  for (std::size_t j = 0; j < A.ncols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.nrows(); ++i) s += A(i, j) * x[i];
    y[j] = s;
  }
  return y;
}

DenseMatrix dense_matmul(const DenseMatrix &A, const DenseMatrix &B) {
  if (A.ncols() != B.nrows()) throw DimensionMismatch("dense_matmul: shape mismatch");
  DenseMatrix C(A.nrows(), B.ncols());
  for (std::size_t j = 0; j < B.ncols(); ++j) {
    for (std::size_t k = 0; k < A.ncols(); ++k) {
      const double b = B(k, j);
      if (b == 0.0) continue;
      for (std::size_t i = 0; i < A.nrows(); ++i) C(i, j) += A(i, k) * b;
    }
  }
  return C;
}

DenseMatrix dense_transpose_matmul(const DenseMatrix &A, const DenseMatrix &B) {
  if (A.nrows() != B.nrows()) throw DimensionMismatch("dense_transpose_matmul: shape mismatch");
  DenseMatrix C(A.ncols(), B.ncols());
  for (std::size_t j = 0; j < B.ncols(); ++j) {
    for (std::size_t i = 0; i < A.ncols(); ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < A.nrows(); ++k) s += A(k, i) * B(k, j);
      C(i, j) = s;
    }
  }
  return C;
}

DenseMatrix dense_transpose(const DenseMatrix &A) {
  DenseMatrix T(A.ncols(), A.nrows());
  for (std::size_t j = 0; j < A.ncols(); ++j)
    for (std::size_t i = 0; i < A.nrows(); ++i) T(j, i) = A(i, j);
  return T;
}

DenseLu::DenseLu(DenseMatrix A) : lu_(std::move(A)) {
  if (lu_.nrows() != lu_.ncols()) throw DimensionMismatch("DenseLu: matrix not square");
  const std::size_t n = lu_.nrows();
  const double tol = 1e-14 * lu_.max_abs();
  pivots_.resize(n);

  double umax = 0.0;
  double umin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double a = std::abs(lu_(i, k));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (!(best > tol)) {
      throw SingularReducedSystem("dense LU: pivot " + std::to_string(best) + " at column " +
                                  std::to_string(k) + " below tolerance");
    }
    pivots_[k] = piv;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
    }
    const double d = lu_(k, k);
    umax = std::max(umax, std::abs(d));
    umin = std::min(umin, std::abs(d));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / d;
      lu_(i, k) = m;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
  cond_estimate_ = umin > 0.0 ? umax / umin : std::numeric_limits<double>::infinity();
}

Vector DenseLu::solve(const Vector &b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw DimensionMismatch("DenseLu::solve: rhs length mismatch");
  Vector x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::swap(x[k], x[pivots_[k]]);
    // forward substitution folded into the pivot sweep
    for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu_(k, j) * x[j];
    x[k] /= lu_(k, k);
  }
  return x;
}

Vector dense_solve(const DenseMatrix &A, const Vector &b) {
  DenseLu lu(A);
  return lu.solve(b);
}

Vector dense_solve_refined(const DenseMatrix &A, const Vector &b) {
  DenseLu lu(A);
  Vector x = lu.solve(b);
  Vector r = b;
  for (std::size_t j = 0; j < A.ncols(); ++j) {
    const double xj = x[j];
    for (std::size_t i = 0; i < A.nrows(); ++i) r[i] -= A(i, j) * xj;
  }
  const Vector dx = lu.solve(r);
  axpy(1.0, dx, x);
  return x;
}

} // namespace krb
