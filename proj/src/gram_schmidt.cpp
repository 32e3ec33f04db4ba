// SPDX-License-Identifier: Apache-2.0

#include "krb/gram_schmidt.hpp"

#include <cmath>

#include "krb/errors.hpp"

namespace krb {

OrthoResult gram_schmidt_m(const std::vector<Vector> &cols, const SpdWeight &M, double drop_tol) {
  if (cols.empty()) throw DimensionMismatch("gram_schmidt_m: empty column list");
  const std::size_t n = cols.front().size();
  for (const auto &c : cols) {
    if (c.size() != n) throw DimensionMismatch("gram_schmidt_m: ragged column lengths");
  }

  std::vector<Vector> q;       // kept columns
  std::vector<Vector> mq;      // M * kept columns, kept in sync to avoid re-applying M
  for (const Vector &v : cols) {
    const double nv0 = m_norm(M, v);
    if (!(nv0 > 0.0)) continue; // zero vector, dropped

    Vector w = v;
    for (unsigned pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double c = dot(mq[k], w);
        axpy(-c, q[k], w);
      }
    }
    const double nw = m_norm(M, w);
    if (nw < drop_tol * nv0) continue;

    scale(w, 1.0 / nw);
    mq.push_back(M.apply(w));
    q.push_back(std::move(w));
  }

  OrthoResult out;
  out.rank = q.size();
  out.basis = q.empty() ? DenseMatrix(n, 0) : DenseMatrix::from_columns(q);
  return out;
}

} // namespace krb
