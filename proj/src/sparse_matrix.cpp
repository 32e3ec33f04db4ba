// SPDX-License-Identifier: Apache-2.0

#include "krb/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace krb {

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols,
                           std::vector<std::size_t> row_starts,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_starts_(std::move(row_starts)),
      col_indices_(std::move(col_indices)), values_(std::move(values)) {
  if (row_starts_.size() != nrows_ + 1 || col_indices_.size() != values_.size() ||
      row_starts_.back() != values_.size()) {
    throw DimensionMismatch("SparseMatrix: inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_starts_[i] > row_starts_[i + 1]) throw DimensionMismatch("SparseMatrix: row_starts not nondecreasing");
    for (std::size_t k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
      if (col_indices_[k] >= ncols_) throw DimensionMismatch("SparseMatrix: column index out of range");
      if (k > row_starts_[i] && col_indices_[k] <= col_indices_[k - 1]) {
        throw DimensionMismatch("SparseMatrix: columns not strictly increasing within a row");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::vector<Triplet> triplets) {
  for (const auto &t : triplets) {
    if (t.row >= nrows || t.col >= ncols) {
      throw DimensionMismatch("from_triplets: entry outside matrix bounds");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> row_starts(nrows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());

  std::size_t k = 0;
  for (std::size_t i = 0; i < nrows; ++i) {
    row_starts[i] = vals.size();
    while (k < triplets.size() && triplets[k].row == i) {
      const std::size_t c = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == i && triplets[k].col == c) {
        sum += triplets[k].value;
        ++k;
      }
      cols.push_back(c);
      vals.push_back(sum);
    }
  }
  row_starts[nrows] = vals.size();
  return SparseMatrix(nrows, ncols, std::move(row_starts), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> rs(n + 1), ci(n);
  std::vector<double> v(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) rs[i] = i;
  for (std::size_t i = 0; i < n; ++i) ci[i] = i;
  return SparseMatrix(n, n, std::move(rs), std::move(ci), std::move(v));
}

SparseMatrix SparseMatrix::diagonal(const Vector &d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> rs(n + 1), ci(n);
  for (std::size_t i = 0; i <= n; ++i) rs[i] = i;
  for (std::size_t i = 0; i < n; ++i) ci[i] = i;
  return SparseMatrix(n, n, std::move(rs), std::move(ci), d);
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_gap() const {
  if (nrows_ != ncols_) throw DimensionMismatch("symmetry_gap: matrix not square");
  std::map<std::pair<std::size_t, std::size_t>, double> entries;
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
      entries[{i, col_indices_[k]}] = values_[k];
    }
  }
  double gap = 0.0;
  for (const auto &[ij, v] : entries) {
    auto it = entries.find({ij.second, ij.first});
    const double vt = it == entries.end() ? 0.0 : it->second;
    gap = std::max(gap, std::abs(v - vt));
  }
  return gap;
}

SparseMatrix SparseMatrix::principal_block(std::size_t begin, std::size_t end) const {
  if (begin > end || end > nrows_ || end > ncols_) {
    throw DimensionMismatch("principal_block: invalid range");
  }
  std::vector<Triplet> t;
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
      const std::size_t j = col_indices_[k];
      if (j >= begin && j < end) t.push_back({i - begin, j - begin, values_[k]});
    }
  }
  return from_triplets(end - begin, end - begin, std::move(t));
}

Vector spmv(const SparseMatrix &A, const Vector &x) {
  if (A.ncols() != x.size()) {
    throw DimensionMismatch("spmv: A is " + std::to_string(A.nrows()) + "x" +
                            std::to_string(A.ncols()) + ", x has length " +
                            std::to_string(x.size()));
  }
  Vector y(A.nrows(), 0.0);
  const auto &rs = A.row_starts();
  const auto &ci = A.col_indices();
  const auto &v = A.values();
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    double s = 0.0;
    for (std::size_t k = rs[i]; k < rs[i + 1]; ++k) s += v[k] * x[ci[k]];
    y[i] = s;
  }
  return y;
}

Vector spmv_transpose(const SparseMatrix &A, const Vector &x) {
  if (A.nrows() != x.size()) {
    throw DimensionMismatch("spmv_transpose: A is " + std::to_string(A.nrows()) + "x" +
                            std::to_string(A.ncols()) + ", x has length " +
                            std::to_string(x.size()));
  }
  Vector y(A.ncols(), 0.0);
  const auto &rs = A.row_starts();
  const auto &ci = A.col_indices();
  const auto &v = A.values();
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = rs[i]; k < rs[i + 1]; ++k) y[ci[k]] += v[k] * x[i];
  }
  return y;
}

SparseMatrix sparse_add(const SparseMatrix &A, const SparseMatrix &B, double alpha, double beta) {
  if (A.nrows() != B.nrows() || A.ncols() != B.ncols()) {
    throw DimensionMismatch("sparse_add: shapes differ");
  }
  std::vector<Triplet> t;
  t.reserve(A.nnz() + B.nnz());
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      t.push_back({i, A.col_indices()[k], alpha * A.values()[k]});
    }
    for (std::size_t k = B.row_starts()[i]; k < B.row_starts()[i + 1]; ++k) {
      t.push_back({i, B.col_indices()[k], beta * B.values()[k]});
    }
  }
  return SparseMatrix::from_triplets(A.nrows(), A.ncols(), std::move(t));
}

} // namespace krb
