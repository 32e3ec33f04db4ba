// SPDX-License-Identifier: Apache-2.0

#include "krb/cholesky.hpp"

#include <algorithm>
#include <cmath>

#include "krb/errors.hpp"

namespace krb {

CholeskyFactorization::CholeskyFactorization(const SparseMatrix &A) {
  if (A.nrows() != A.ncols()) throw DimensionMismatch("cholesky: matrix not square");
  n_ = A.nrows();
  perm_ = rcm_order(A);

  // Envelope profile of the reordered pattern. Fill stays inside the
  // envelope, so the symbolic phase is just the first-column profile.
  env_first_.assign(n_, 0);
  for (std::size_t k = 0; k < n_; ++k) env_first_[k] = k;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t pi = perm_.inverse[i];
    for (std::size_t s = A.row_starts()[i]; s < A.row_starts()[i + 1]; ++s) {
      const std::size_t pj = perm_.inverse[A.col_indices()[s]];
      if (pj < pi) env_first_[pi] = std::min(env_first_[pi], pj);
      if (pi < pj) env_first_[pj] = std::min(env_first_[pj], pi);
    }
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t k = 0; k < n_; ++k) {
    offsets_[k + 1] = offsets_[k] + (k - env_first_[k] + 1);
  }
  vals_.assign(offsets_[n_], 0.0);

  numeric(A);
}

void CholeskyFactorization::refactor(const SparseMatrix &A) {
  if (A.nrows() != n_ || A.ncols() != n_) throw DimensionMismatch("cholesky refactor: shape mismatch");
  numeric(A);
}

void CholeskyFactorization::numeric(const SparseMatrix &A) {
  std::fill(vals_.begin(), vals_.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t pi = perm_.inverse[i];
    for (std::size_t s = A.row_starts()[i]; s < A.row_starts()[i + 1]; ++s) {
      const std::size_t pj = perm_.inverse[A.col_indices()[s]];
      if (pj <= pi) vals_[offsets_[pi] + (pj - env_first_[pi])] = A.values()[s];
    }
  }

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t fk = env_first_[k];
    double *row_k = vals_.data() + offsets_[k];
    for (std::size_t l = fk; l < k; ++l) {
      const std::size_t fl = env_first_[l];
      const double *row_l = vals_.data() + offsets_[l];
      const std::size_t t0 = std::max(fk, fl);
      double s = 0.0;
      for (std::size_t t = t0; t < l; ++t) s += row_k[t - fk] * row_l[t - fl];
      row_k[l - fk] = (row_k[l - fk] - s) / row_l[l - fl];
    }
    double d = row_k[k - fk];
    for (std::size_t t = fk; t < k; ++t) d -= row_k[t - fk] * row_k[t - fk];
    if (!(d > 0.0)) {
      throw NotPositiveDefinite("cholesky: nonpositive pivot " + std::to_string(d) +
                                " at row " + std::to_string(k));
    }
    row_k[k - fk] = std::sqrt(d);
  }
}

Vector CholeskyFactorization::solve(const Vector &b) const {
  if (b.size() != n_) throw DimensionMismatch("cholesky solve: rhs length mismatch");
  Vector y(n_);
  for (std::size_t k = 0; k < n_; ++k) y[k] = b[perm_.perm[k]];

  // forward L y' = P b
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t fk = env_first_[k];
    const double *row_k = vals_.data() + offsets_[k];
    double s = y[k];
    for (std::size_t t = fk; t < k; ++t) s -= row_k[t - fk] * y[t];
    y[k] = s / row_k[k - fk];
  }
  // backward L^t x' = y', column sweep
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t fk = env_first_[k];
    const double *row_k = vals_.data() + offsets_[k];
    y[k] /= row_k[k - fk];
    const double xk = y[k];
    for (std::size_t t = fk; t < k; ++t) y[t] -= row_k[t - fk] * xk;
  }

  Vector x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[perm_.perm[k]] = y[k];
  return x;
}

SparseMatrix CholeskyFactorization::lower() const {
  std::vector<Triplet> t;
  t.reserve(vals_.size());
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t fk = env_first_[k];
    for (std::size_t l = fk; l <= k; ++l) {
      t.push_back({k, l, vals_[offsets_[k] + (l - fk)]});
    }
  }
  return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

} // namespace krb
