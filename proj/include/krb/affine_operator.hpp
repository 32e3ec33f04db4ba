// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "krb/sparse_matrix.hpp"

namespace krb {

/// Evaluates the coefficient vector theta(mu) of an affine operator family.
/// `id` and `constants` identify the map in exported problem manifests.
struct ThetaMap {
  std::size_t mu_arity = 0;
  std::size_t arity = 0; // J
  std::function<std::vector<double>(std::span<const double>)> eval_fn;
  std::string id;
  std::vector<double> constants;

  std::vector<double> operator()(std::span<const double> mu) const;
};

/// Parametric family A(theta) = sum_j theta_j * A_j of square sparse terms
/// with a shared dimension. The union sparsity pattern is precomputed once
/// so repeated assembly at many parameters reuses it.
class AffineOperator {
public:
  explicit AffineOperator(std::vector<SparseMatrix> terms);

  std::size_t dim() const { return dim_; }
  std::size_t arity() const { return terms_.size(); } // J
  const std::vector<SparseMatrix> &terms() const { return terms_; }
  const SparseMatrix &term(std::size_t j) const { return terms_[j]; }

  /// Returns sum_j theta_j A_j on the union pattern.
  SparseMatrix assemble(std::span<const double> theta) const;

  /// y = A(theta) x without assembling.
  Vector apply(std::span<const double> theta, const Vector &x) const;
  Vector apply_transpose(std::span<const double> theta, const Vector &x) const;

private:
  std::vector<SparseMatrix> terms_;
  std::size_t dim_ = 0;
  // union pattern and the scatter of every term's nnz into it
  std::vector<std::size_t> union_row_starts_;
  std::vector<std::size_t> union_col_indices_;
  std::vector<std::vector<std::size_t>> term_to_union_;
};

} // namespace krb
