// SPDX-License-Identifier: Apache-2.0

#include "krb/linear_operator.hpp"

#include "krb/errors.hpp"

namespace krb {

Factorization Factorization::cholesky(const SparseMatrix &A) {
  return Factorization(CholeskyFactorization(A));
}

Factorization Factorization::lu(const SparseMatrix &A) {
  return Factorization(BandLuFactorization(A));
}

Factorization::Kind Factorization::kind() const {
  return std::holds_alternative<CholeskyFactorization>(impl_) ? Kind::cholesky : Kind::lu;
}

std::size_t Factorization::dim() const {
  return std::visit([](const auto &f) { return f.dim(); }, impl_);
}

const Permutation &Factorization::permutation() const {
  return std::visit([](const auto &f) -> const Permutation & { return f.permutation(); }, impl_);
}

Vector Factorization::solve(const Vector &b) const {
  return std::visit([&](const auto &f) { return f.solve(b); }, impl_);
}

Vector Factorization::solve_transpose(const Vector &b) const {
  if (const auto *c = std::get_if<CholeskyFactorization>(&impl_)) return c->solve(b);
  return std::get<BandLuFactorization>(impl_).solve_transpose(b);
}

void Factorization::refactor(const SparseMatrix &A) {
  std::visit([&](auto &f) { f.refactor(A); }, impl_);
}

const CholeskyFactorization &Factorization::as_cholesky() const {
  return std::get<CholeskyFactorization>(impl_);
}

const BandLuFactorization &Factorization::as_lu() const {
  return std::get<BandLuFactorization>(impl_);
}

LinearOperatorHandle operator_from_sparse(std::shared_ptr<const SparseMatrix> A) {
  LinearOperatorHandle h;
  h.dim = A->nrows();
  h.apply = [A](const Vector &x) { return spmv(*A, x); };
  h.apply_adjoint = [A](const Vector &x) { return spmv_transpose(*A, x); };
  return h;
}

LinearOperatorHandle operator_from_sparse(SparseMatrix A) {
  return operator_from_sparse(std::make_shared<const SparseMatrix>(std::move(A)));
}

LinearOperatorHandle operator_from_factorization(std::shared_ptr<const Factorization> F) {
  LinearOperatorHandle h;
  h.dim = F->dim();
  h.apply = [F](const Vector &x) { return F->solve(x); };
  h.apply_adjoint = [F](const Vector &x) { return F->solve_transpose(x); };
  return h;
}

LinearOperatorHandle make_exact_preconditioner(const AffineOperator &op,
                                               std::span<const double> theta0, bool spd_hint) {
  const SparseMatrix A0 = op.assemble(theta0);
  auto F = std::make_shared<const Factorization>(spd_hint ? Factorization::cholesky(A0)
                                                          : Factorization::lu(A0));
  return operator_from_factorization(std::move(F));
}

LinearOperatorHandle make_block_diag_preconditioner(const SparseMatrix &A,
                                                    const std::vector<std::size_t> &block_starts) {
  if (block_starts.size() < 2 || block_starts.front() != 0 || block_starts.back() != A.nrows()) {
    throw DimensionMismatch("block preconditioner: invalid block boundaries");
  }
  auto factors = std::make_shared<std::vector<CholeskyFactorization>>();
  for (std::size_t b = 0; b + 1 < block_starts.size(); ++b) {
    if (block_starts[b] >= block_starts[b + 1]) {
      throw DimensionMismatch("block preconditioner: empty block");
    }
    factors->emplace_back(A.principal_block(block_starts[b], block_starts[b + 1]));
  }
  auto starts = std::make_shared<const std::vector<std::size_t>>(block_starts);

  LinearOperatorHandle h;
  h.dim = A.nrows();
  auto solve_all = [factors, starts](const Vector &x) {
    Vector y(starts->back());
    for (std::size_t b = 0; b + 1 < starts->size(); ++b) {
      const std::size_t lo = (*starts)[b];
      const std::size_t hi = (*starts)[b + 1];
      Vector xb(x.begin() + static_cast<std::ptrdiff_t>(lo),
                x.begin() + static_cast<std::ptrdiff_t>(hi));
      const Vector yb = (*factors)[b].solve(xb);
      std::copy(yb.begin(), yb.end(), y.begin() + static_cast<std::ptrdiff_t>(lo));
    }
    return y;
  };
  h.apply = solve_all;
  h.apply_adjoint = solve_all; // SPD blocks, self-adjoint
  return h;
}

} // namespace krb
