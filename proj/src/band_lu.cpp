// SPDX-License-Identifier: Apache-2.0

#include "krb/band_lu.hpp"

#include <algorithm>
#include <cmath>

#include "krb/errors.hpp"

namespace krb {

BandLuFactorization::BandLuFactorization(const SparseMatrix &A) {
  if (A.nrows() != A.ncols()) throw DimensionMismatch("band LU: matrix not square");
  n_ = A.nrows();
  perm_ = rcm_order(A);

  kl_ = 0;
  ku_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t pi = perm_.inverse[i];
    for (std::size_t s = A.row_starts()[i]; s < A.row_starts()[i + 1]; ++s) {
      const std::size_t pj = perm_.inverse[A.col_indices()[s]];
      if (pi > pj) kl_ = std::max(kl_, pi - pj);
      if (pj > pi) ku_ = std::max(ku_, pj - pi);
    }
  }
  ipiv_.assign(n_, 0);
  ab_.assign((2 * kl_ + ku_ + 1) * n_, 0.0);
  numeric(A);
}

void BandLuFactorization::refactor(const SparseMatrix &A) {
  if (A.nrows() != n_ || A.ncols() != n_) throw DimensionMismatch("band LU refactor: shape mismatch");
  numeric(A);
}

void BandLuFactorization::numeric(const SparseMatrix &A) {
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  const std::size_t kv = kl_ + ku_; // band row of the diagonal
  std::fill(ab_.begin(), ab_.end(), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double & {
    return ab_[c * ldab + (kv + r - c)];
  };

  double amax = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t pi = perm_.inverse[i];
    for (std::size_t s = A.row_starts()[i]; s < A.row_starts()[i + 1]; ++s) {
      const std::size_t pj = perm_.inverse[A.col_indices()[s]];
      at(pi, pj) = A.values()[s];
      amax = std::max(amax, std::abs(A.values()[s]));
    }
  }
  const double tol = 1e-14 * amax;

  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    std::size_t jp = j;
    double best = std::abs(at(j, j));
    for (std::size_t i = 1; i <= km; ++i) {
      const double a = std::abs(at(j + i, j));
      if (a > best) {
        best = a;
        jp = j + i;
      }
    }
    if (!(best > tol)) {
      throw SingularMatrix("band LU: pivot " + std::to_string(best) + " at column " +
                           std::to_string(j) + " below tolerance");
    }
    ipiv_[j] = jp;
    const std::size_t ju = std::min(j + kv, n_ - 1);
    if (jp != j) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(jp, c));
    }
    if (km > 0) {
      const double d = at(j, j);
      for (std::size_t i = 1; i <= km; ++i) at(j + i, j) /= d;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double f = at(j, c);
        if (f == 0.0) continue;
        for (std::size_t i = 1; i <= km; ++i) at(j + i, c) -= at(j + i, j) * f;
      }
    }
  }
}

Vector BandLuFactorization::solve(const Vector &b) const {
  if (b.size() != n_) throw DimensionMismatch("band LU solve: rhs length mismatch");
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  const std::size_t kv = kl_ + ku_;
  auto at = [&](std::size_t r, std::size_t c) -> double {
    return ab_[c * ldab + (kv + r - c)];
  };

  Vector x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[k] = b[perm_.perm[k]];

  // L solve with interleaved row interchanges
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t jp = ipiv_[j];
    if (jp != j) std::swap(x[j], x[jp]);
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    for (std::size_t i = 1; i <= km; ++i) x[j + i] -= at(j + i, j) * x[j];
  }
  // U solve
  for (std::size_t j = n_; j-- > 0;) {
    double s = x[j];
    const std::size_t cu = std::min(j + kv, n_ - 1);
    for (std::size_t c = j + 1; c <= cu; ++c) s -= at(j, c) * x[c];
    x[j] = s / at(j, j);
  }

  Vector out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[perm_.perm[k]] = x[k];
  return out;
}

Vector BandLuFactorization::solve_transpose(const Vector &b) const {
  if (b.size() != n_) throw DimensionMismatch("band LU solve_transpose: rhs length mismatch");
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  const std::size_t kv = kl_ + ku_;
  auto at = [&](std::size_t r, std::size_t c) -> double {
    return ab_[c * ldab + (kv + r - c)];
  };

  Vector x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[k] = b[perm_.perm[k]];

  // U^t solve (forward)
  for (std::size_t j = 0; j < n_; ++j) {
    double s = x[j];
    const std::size_t r0 = j > kv ? j - kv : 0;
    for (std::size_t r = r0; r < j; ++r) s -= at(r, j) * x[r];
    x[j] = s / at(j, j);
  }
  // L^t solve with interchanges in reverse order
  for (std::size_t j = n_; j-- > 0;) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    double s = x[j];
    for (std::size_t i = 1; i <= km; ++i) s -= at(j + i, j) * x[j + i];
    x[j] = s;
    const std::size_t jp = ipiv_[j];
    if (jp != j) std::swap(x[j], x[jp]);
  }

  Vector out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[perm_.perm[k]] = x[k];
  return out;
}

std::vector<std::size_t> BandLuFactorization::pivot_perm() const {
  std::vector<std::size_t> p(n_);
  for (std::size_t k = 0; k < n_; ++k) p[k] = k;
  for (std::size_t j = 0; j < n_; ++j) {
    if (ipiv_[j] != j) std::swap(p[j], p[ipiv_[j]]);
  }
  return p;
}

SparseMatrix BandLuFactorization::upper() const {
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  const std::size_t kv = kl_ + ku_;
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < n_; ++c) {
    const std::size_t r0 = c > kv ? c - kv : 0;
    for (std::size_t r = r0; r <= c; ++r) {
      const double v = ab_[c * ldab + (kv + r - c)];
      if (v != 0.0) t.push_back({r, c, v});
    }
    if (ab_[c * ldab + kv] == 0.0) t.push_back({c, c, 0.0});
  }
  return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

SparseMatrix BandLuFactorization::lower() const {
  // The stored multipliers are interleaved with the row interchanges; the
  // classical L of P_r A = L U is recovered by replaying the later swaps on
  // the earlier multiplier columns.
  const std::size_t ldab = 2 * kl_ + ku_ + 1;
  const std::size_t kv = kl_ + ku_;
  DenseMatrix L = DenseMatrix::identity(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    for (std::size_t i = 1; i <= km; ++i) L(j + i, j) = ab_[j * ldab + kv + i];
    // replay this step's interchange on all previous columns
    if (ipiv_[j] != j) {
      for (std::size_t c = 0; c < j; ++c) std::swap(L(j, c), L(ipiv_[j], c));
    }
  }
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = j; i < n_; ++i) {
      if (L(i, j) != 0.0) t.push_back({i, j, L(i, j)});
    }
  }
  return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

} // namespace krb
