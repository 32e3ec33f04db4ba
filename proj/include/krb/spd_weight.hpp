// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "krb/sparse_matrix.hpp"

namespace krb {

/// Weight for inner products: either the identity (Euclidean) or an SPD
/// sparse matrix M. Matrix weights are validated for symmetry on
/// construction and for positivity on a few probe vectors.
class SpdWeight {
public:
  SpdWeight() = default; // identity
  static SpdWeight identity() { return SpdWeight(); }
  static SpdWeight matrix(SparseMatrix M);

  bool is_identity() const { return matrix_ == nullptr; }
  const SparseMatrix &matrix_ref() const;

  Vector apply(const Vector &x) const;

private:
  std::shared_ptr<const SparseMatrix> matrix_;
};

/// (M x, y); Euclidean dot for the identity weight.
double m_inner(const SpdWeight &M, const Vector &x, const Vector &y);

double m_norm(const SpdWeight &M, const Vector &x);

} // namespace krb
