// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "krb/vector_ops.hpp"

namespace krb {

/// Column-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t nrows, std::size_t ncols)
      : nrows_(nrows), ncols_(ncols), values_(nrows * ncols, 0.0) {}
  DenseMatrix(std::size_t nrows, std::size_t ncols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_columns(const std::vector<Vector> &cols);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }

  double &operator()(std::size_t i, std::size_t j) { return values_[j * nrows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * nrows_ + i]; }

  const std::vector<double> &values() const { return values_; }
  std::vector<double> &values() { return values_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector &v);

  /// Leading nrows x ncols block.
  DenseMatrix top_left(std::size_t nrows, std::size_t ncols) const;

  double max_abs() const;

private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<double> values_;
};

Vector dense_matvec(const DenseMatrix &A, const Vector &x);
Vector dense_matvec_transpose(const DenseMatrix &A, const Vector &x);
DenseMatrix dense_matmul(const DenseMatrix &A, const DenseMatrix &B);
/// A^t B
DenseMatrix dense_transpose_matmul(const DenseMatrix &A, const DenseMatrix &B);
DenseMatrix dense_transpose(const DenseMatrix &A);

/// LU factorization with partial pivoting of a square dense matrix.
/// Pivots below 1e-14 * max|A| are treated as singular.
class DenseLu {
public:
  explicit DenseLu(DenseMatrix A);

  std::size_t dim() const { return lu_.nrows(); }
  Vector solve(const Vector &b) const;

  /// Crude condition estimate from the pivot spread max|u_ii|/min|u_ii|.
  double condition_estimate() const { return cond_estimate_; }

private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
  double cond_estimate_ = 0.0;
};

/// Solves A x = b by LU with partial pivoting.
/// Throws SingularReducedSystem when a pivot falls below 1e-14 * max|A|.
Vector dense_solve(const DenseMatrix &A, const Vector &b);

/// dense_solve plus one iterative-refinement pass.
Vector dense_solve_refined(const DenseMatrix &A, const Vector &b);

} // namespace krb
