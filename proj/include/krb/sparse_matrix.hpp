// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "krb/vector_ops.hpp"

namespace krb {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and carry no structural duplicates, so matvec
/// accumulation order (and hence the floating-point result) is fixed.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_starts,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Builds from an unordered triplet list; duplicates are summed, then
  /// columns sorted per row.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::vector<Triplet> triplets);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(const Vector &d);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t> &row_starts() const { return row_starts_; }
  const std::vector<std::size_t> &col_indices() const { return col_indices_; }
  const std::vector<double> &values() const { return values_; }
  std::vector<double> &values() { return values_; }

  double max_abs() const;

  /// max |A_ij - A_ji| over the union pattern.
  double symmetry_gap() const;

  /// Principal block A[begin:end, begin:end].
  SparseMatrix principal_block(std::size_t begin, std::size_t end) const;

private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_starts_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// y = A x, accumulated in stored row order.
Vector spmv(const SparseMatrix &A, const Vector &x);

/// y = A^t x without materializing the transpose.
Vector spmv_transpose(const SparseMatrix &A, const Vector &x);

/// C = A + B entrywise on the union pattern.
SparseMatrix sparse_add(const SparseMatrix &A, const SparseMatrix &B, double alpha = 1.0,
                        double beta = 1.0);

} // namespace krb
