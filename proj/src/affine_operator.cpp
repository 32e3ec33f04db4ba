// SPDX-License-Identifier: Apache-2.0

#include "krb/affine_operator.hpp"

#include <algorithm>
#include <cmath>

#include "krb/errors.hpp"

namespace krb {

std::vector<double> ThetaMap::operator()(std::span<const double> mu) const {
  if (mu.size() != mu_arity) {
    throw ArityMismatch("ThetaMap: parameter point has " + std::to_string(mu.size()) +
                        " components, expected " + std::to_string(mu_arity));
  }
  std::vector<double> theta = eval_fn(mu);
  if (theta.size() != arity) {
    throw ArityMismatch("ThetaMap: evaluator returned " + std::to_string(theta.size()) +
                        " coefficients, expected " + std::to_string(arity));
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw ThetaDomainError("ThetaMap: nonfinite coefficient");
  }
  return theta;
}

AffineOperator::AffineOperator(std::vector<SparseMatrix> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DimensionMismatch("AffineOperator: needs at least one term");
  dim_ = terms_.front().nrows();
  for (const auto &t : terms_) {
    if (t.nrows() != dim_ || t.ncols() != dim_) {
      throw DimensionMismatch("AffineOperator: all terms must be square with equal dimension");
    }
  }

  // union pattern, columns sorted per row
  union_row_starts_.assign(dim_ + 1, 0);
  std::vector<std::size_t> merged;
  for (std::size_t i = 0; i < dim_; ++i) {
    merged.clear();
    for (const auto &t : terms_) {
      for (std::size_t k = t.row_starts()[i]; k < t.row_starts()[i + 1]; ++k) {
        merged.push_back(t.col_indices()[k]);
      }
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    union_row_starts_[i + 1] = union_row_starts_[i] + merged.size();
    union_col_indices_.insert(union_col_indices_.end(), merged.begin(), merged.end());
  }

  term_to_union_.resize(terms_.size());
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const auto &t = terms_[j];
    term_to_union_[j].resize(t.nnz());
    for (std::size_t i = 0; i < dim_; ++i) {
      const auto row_begin = union_col_indices_.begin() +
                             static_cast<std::ptrdiff_t>(union_row_starts_[i]);
      const auto row_end = union_col_indices_.begin() +
                           static_cast<std::ptrdiff_t>(union_row_starts_[i + 1]);
      for (std::size_t k = t.row_starts()[i]; k < t.row_starts()[i + 1]; ++k) {
        const auto it = std::lower_bound(row_begin, row_end, t.col_indices()[k]);
        term_to_union_[j][k] =
            union_row_starts_[i] + static_cast<std::size_t>(it - row_begin);
      }
    }
  }
}

SparseMatrix AffineOperator::assemble(std::span<const double> theta) const {
  if (theta.size() != arity()) {
    throw ArityMismatch("assemble: theta has " + std::to_string(theta.size()) +
                        " entries, operator arity is " + std::to_string(arity()));
  }
  std::vector<double> values(union_col_indices_.size(), 0.0);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const double tj = theta[j];
    const auto &vals = terms_[j].values();
    const auto &map = term_to_union_[j];
    for (std::size_t k = 0; k < vals.size(); ++k) values[map[k]] += tj * vals[k];
  }
  return SparseMatrix(dim_, dim_, union_row_starts_, union_col_indices_, std::move(values));
}

Vector AffineOperator::apply(std::span<const double> theta, const Vector &x) const {
  if (theta.size() != arity()) throw ArityMismatch("apply: theta arity mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (theta[j] == 0.0) continue;
    const Vector yj = spmv(terms_[j], x);
    axpy(theta[j], yj, y);
  }
  return y;
}

Vector AffineOperator::apply_transpose(std::span<const double> theta, const Vector &x) const {
  if (theta.size() != arity()) throw ArityMismatch("apply_transpose: theta arity mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (theta[j] == 0.0) continue;
    const Vector yj = spmv_transpose(terms_[j], x);
    axpy(theta[j], yj, y);
  }
  return y;
}

} // namespace krb
