// SPDX-License-Identifier: Apache-2.0

#include "krb/spd_weight.hpp"

#include <cmath>

#include "krb/errors.hpp"

namespace krb {

SpdWeight SpdWeight::matrix(SparseMatrix M) {
  if (M.nrows() != M.ncols()) throw DimensionMismatch("SpdWeight: matrix not square");
  if (M.symmetry_gap() > 1e-12 * M.max_abs()) {
    throw NotPositiveDefinite("SpdWeight: matrix is not symmetric to tolerance");
  }
  // positivity probe on a few deterministic test vectors
  const std::size_t n = M.nrows();
  for (unsigned probe = 0; probe < 3; ++probe) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 0.5 + std::cos(static_cast<double>(i * (probe + 1)) + 0.3 * probe);
    }
    const double q = dot(spmv(M, v), v);
    if (!(q > 0.0)) throw NotPositiveDefinite("SpdWeight: probe vector has nonpositive energy");
  }
  SpdWeight w;
  w.matrix_ = std::make_shared<const SparseMatrix>(std::move(M));
  return w;
}

const SparseMatrix &SpdWeight::matrix_ref() const {
  if (!matrix_) throw Error("SpdWeight: identity weight has no matrix");
  return *matrix_;
}

Vector SpdWeight::apply(const Vector &x) const {
  if (!matrix_) return x;
  return spmv(*matrix_, x);
}

double m_inner(const SpdWeight &M, const Vector &x, const Vector &y) {
  check_same_size(x, y, "m_inner");
  if (M.is_identity()) return dot(x, y);
  return dot(spmv(M.matrix_ref(), x), y);
}

double m_norm(const SpdWeight &M, const Vector &x) {
  const double q = m_inner(M, x, x);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

} // namespace krb
