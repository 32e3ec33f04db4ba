// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "krb/permutation.hpp"
#include "krb/sparse_matrix.hpp"

namespace krb {

/// Sparse Cholesky P A P^t = L L^t on the envelope of the RCM-reordered
/// pattern, computed row by row. The symbolic profile is kept separate from
/// the numeric values so the same pattern can be refactored at new
/// parameter values.
class CholeskyFactorization {
public:
  /// Symbolic + numeric factorization. Throws NotPositiveDefinite on a
  /// nonpositive pivot.
  explicit CholeskyFactorization(const SparseMatrix &A);

  /// Numeric refactorization for a matrix with the same sparsity pattern.
  void refactor(const SparseMatrix &A);

  std::size_t dim() const { return n_; }
  const Permutation &permutation() const { return perm_; }

  Vector solve(const Vector &b) const;

  /// L of P A P^t = L L^t as CSR (row-major lower triangle).
  SparseMatrix lower() const;

private:
  void numeric(const SparseMatrix &A);

  std::size_t n_ = 0;
  Permutation perm_;
  std::vector<std::size_t> env_first_; // first stored column of each row
  std::vector<std::size_t> offsets_;   // start of each row segment in vals_
  std::vector<double> vals_;           // row segments [env_first_[i] .. i]
};

} // namespace krb
