// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "krb/permutation.hpp"
#include "krb/sparse_matrix.hpp"

namespace krb {

/// Sparse LU with partial pivoting on the RCM-reordered matrix, stored in
/// LAPACK-style band format (lower bandwidth kl, upper bandwidth ku, with
/// kl extra superdiagonals of fill from row interchanges). Symbolic data
/// (ordering and bandwidths) is reusable for refactorization at a new
/// parameter with the same pattern.
class BandLuFactorization {
public:
  explicit BandLuFactorization(const SparseMatrix &A);

  void refactor(const SparseMatrix &A);

  std::size_t dim() const { return n_; }
  const Permutation &permutation() const { return perm_; }
  const std::vector<std::size_t> &row_pivots() const { return ipiv_; }

  Vector solve(const Vector &b) const;
  Vector solve_transpose(const Vector &b) const;

  /// Unit-lower L and upper U of P_r (P A P^t) = L U, where P is the RCM
  /// ordering and P_r the accumulated row interchanges. Extraction builds a
  /// dense scratch copy, so it is meant for verification at small sizes.
  SparseMatrix lower() const;
  SparseMatrix upper() const;
  /// Accumulated row permutation P_r as an index map (row k of the permuted
  /// matrix came from RCM-row pivot_perm()[k]).
  std::vector<std::size_t> pivot_perm() const;

private:
  void numeric(const SparseMatrix &A);

  std::size_t n_ = 0;
  std::size_t kl_ = 0;
  std::size_t ku_ = 0;
  Permutation perm_;
  std::vector<std::size_t> ipiv_;
  std::vector<double> ab_; // column-major band storage, ldab = 2*kl + ku + 1
};

} // namespace krb
