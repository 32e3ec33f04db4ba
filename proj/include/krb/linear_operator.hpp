// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>

#include "krb/affine_operator.hpp"
#include "krb/band_lu.hpp"
#include "krb/cholesky.hpp"

namespace krb {

/// Opaque linear operator: apply and its adjoint. Immutable once built;
/// concurrent applies on a shared handle are safe.
struct LinearOperatorHandle {
  std::size_t dim = 0;
  std::function<Vector(const Vector &)> apply;
  std::function<Vector(const Vector &)> apply_adjoint;
};

/// Direct factorization of a sparse matrix, Cholesky or banded LU.
class Factorization {
public:
  enum class Kind { cholesky, lu };

  static Factorization cholesky(const SparseMatrix &A);
  static Factorization lu(const SparseMatrix &A);

  Kind kind() const;
  std::size_t dim() const;
  const Permutation &permutation() const;

  Vector solve(const Vector &b) const;
  Vector solve_transpose(const Vector &b) const;

  void refactor(const SparseMatrix &A);

  const CholeskyFactorization &as_cholesky() const;
  const BandLuFactorization &as_lu() const;

private:
  explicit Factorization(std::variant<CholeskyFactorization, BandLuFactorization> impl)
      : impl_(std::move(impl)) {}
  std::variant<CholeskyFactorization, BandLuFactorization> impl_;
};

/// Wraps a sparse matrix as an operator (spmv / transposed spmv).
LinearOperatorHandle operator_from_sparse(std::shared_ptr<const SparseMatrix> A);
LinearOperatorHandle operator_from_sparse(SparseMatrix A);

/// Wraps a shared factorization as a solve operator.
LinearOperatorHandle operator_from_factorization(std::shared_ptr<const Factorization> F);

/// B = A(theta0)^{-1} realized by one direct factorization (Cholesky when
/// spd_hint, banded LU otherwise); apply_adjoint is the transposed solve.
/// The factorization is computed once and shared by every apply.
LinearOperatorHandle make_exact_preconditioner(const AffineOperator &op,
                                               std::span<const double> theta0, bool spd_hint);

/// Block-diagonal SPD preconditioner: each diagonal block of A is factored
/// by Cholesky and the blocks are solved independently. `block_starts` are
/// the boundaries 0 = b_0 < b_1 < ... < b_k = n.
LinearOperatorHandle make_block_diag_preconditioner(const SparseMatrix &A,
                                                    const std::vector<std::size_t> &block_starts);

} // namespace krb
