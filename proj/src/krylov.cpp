// SPDX-License-Identifier: Apache-2.0

#include "krb/krylov.hpp"

#include <cmath>

#include "krb/dense_matrix.hpp"
#include "krb/errors.hpp"

namespace krb {

namespace {
constexpr double kBreakdownTol = 1e-14;
}

KrylovTrace pcg_run(const LinOp &A_apply, const LinOp &B_apply, const Vector &f, std::size_t m,
                    double tol) {
  if (m < 1) throw DimensionMismatch("pcg_run: m must be >= 1");
  KrylovTrace tr;
  tr.method = KrylovTrace::Method::pcg;

  const double fnorm = norm2(f);
  Vector u(f.size(), 0.0);
  Vector r = f;
  Vector z = B_apply(r);
  Vector p = z;

  tr.iterates.push_back(u);
  tr.precond_residuals.push_back(z);
  tr.directions.push_back(p);
  tr.residual_norms.push_back(fnorm);

  double rz = dot(r, z);
  for (std::size_t k = 1; k < m; ++k) {
    const Vector Ap = A_apply(p);
    const double app = dot(Ap, p);
    if (!(app > 0.0) || !std::isfinite(app)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    const double alpha = rz / app;
    if (!std::isfinite(alpha)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    axpy(alpha, p, u);
    axpy(-alpha, Ap, r);
    z = B_apply(r);
    const double rz_new = dot(r, z);
    const double rnorm = norm2(r);

    tr.alphas.push_back(alpha);
    tr.iterates.push_back(u);
    tr.precond_residuals.push_back(z);
    tr.residual_norms.push_back(rnorm);

    if (tol > 0.0 && rnorm <= tol * fnorm) {
      tr.stop_reason = KrylovTrace::StopReason::tolerance;
      return tr;
    }
    const double beta = rz_new / rz;
    if (!std::isfinite(beta)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    rz = rz_new;
    Vector pn = z;
    axpy(beta, p, pn);
    p = std::move(pn);
    tr.betas.push_back(beta);
    tr.directions.push_back(p);
  }
  tr.stop_reason = KrylovTrace::StopReason::max_iter;
  return tr;
}

KrylovTrace gmres_run(const LinOp &A_apply, const LinOp &B_apply, const Vector &f, std::size_t m,
                      const SpdWeight &M, double tol) {
  if (m < 1) throw DimensionMismatch("gmres_run: m must be >= 1");
  KrylovTrace tr;
  tr.method = KrylovTrace::Method::gmres;

  const Vector bf = B_apply(f);
  const double beta0 = m_norm(M, bf);
  Vector u0(f.size(), 0.0);
  tr.iterates.push_back(u0);
  tr.precond_residuals.push_back(bf);
  tr.residual_norms.push_back(beta0);
  if (beta0 == 0.0) {
    tr.stop_reason = KrylovTrace::StopReason::breakdown;
    return tr;
  }

  // Arnoldi basis, M-orthonormal; Hessenberg kept as Givens-rotated R.
  std::vector<Vector> V{scaled(bf, 1.0 / beta0)};
  std::vector<Vector> MV{M.apply(V[0])};
  std::vector<std::vector<double>> R; // columns of the rotated Hessenberg
  std::vector<double> cs, sn;
  std::vector<double> g{beta0};
  double res = beta0;

  for (std::size_t k = 1; k < m; ++k) {
    Vector w = B_apply(A_apply(V.back()));
    std::vector<double> h(k + 1, 0.0);
    for (unsigned pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < k; ++i) {
        const double c = dot(MV[i], w);
        h[i] += c;
        axpy(-c, V[i], w);
      }
    }
    const double wnorm = m_norm(M, w);
    h[k] = wnorm;
    const bool happy = wnorm < kBreakdownTol * beta0;

    // apply previous rotations, then the new one
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double denom = std::hypot(h[k - 1], h[k]);
    if (denom == 0.0) {
      // Krylov space closed with the previous iterate already exact.
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    const double c_new = h[k - 1] / denom;
    const double s_new = h[k] / denom;
    cs.push_back(c_new);
    sn.push_back(s_new);
    h[k - 1] = denom;
    h[k] = 0.0;
    const double g_next = -s_new * g[k - 1];
    g[k - 1] = c_new * g[k - 1];
    g.push_back(g_next);
    R.push_back(h);
    res = std::abs(g_next);

    // y solves the rotated triangular system; u_k = V y
    std::vector<double> y(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
      double s = g[i];
      for (std::size_t j = i + 1; j < k; ++j) s -= R[j][i] * y[j];
      y[i] = s / R[i][i];
    }
    Vector u(f.size(), 0.0);
    for (std::size_t j = 0; j < k; ++j) axpy(y[j], V[j], u);
    Vector z = B_apply(subtract(f, A_apply(u)));

    tr.iterates.push_back(std::move(u));
    tr.precond_residuals.push_back(std::move(z));
    tr.residual_norms.push_back(res);

    if (happy) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    if (tol > 0.0 && res <= tol * beta0) {
      tr.stop_reason = KrylovTrace::StopReason::tolerance;
      return tr;
    }
    scale(w, 1.0 / wnorm);
    MV.push_back(M.apply(w));
    V.push_back(std::move(w));
  }
  tr.stop_reason = KrylovTrace::StopReason::max_iter;
  return tr;
}

KrylovTrace bicg_run(const LinOp &A_apply, const LinOp &At_apply, const LinOp &B_apply,
                     const LinOp &Bt_apply, const Vector &f, const Vector &r0_star, std::size_t m,
                     double tol) {
  if (m < 1) throw DimensionMismatch("bicg_run: m must be >= 1");
  if (dot(f, r0_star) == 0.0) {
    throw Error("bicg_run: (f, r0_star) must be nonzero");
  }
  KrylovTrace tr;
  tr.method = KrylovTrace::Method::bicg;

  const double fnorm = norm2(f);
  Vector u(f.size(), 0.0);
  Vector r = f;
  Vector z = B_apply(r);
  Vector p = z;
  Vector rs = r0_star;
  Vector zs = Bt_apply(rs);
  Vector ps = zs;

  tr.iterates.push_back(u);
  tr.precond_residuals.push_back(z);
  tr.dual_precond_residuals.push_back(zs);
  tr.directions.push_back(p);
  tr.dual_directions.push_back(ps);
  tr.residual_norms.push_back(fnorm);

  double rz = dot(r, zs);

  for (std::size_t k = 1; k < m; ++k) {
    const Vector Ap = A_apply(p);
    const Vector Atps = At_apply(ps);
    const double denom = dot(Ap, ps);
    if (std::abs(denom) < kBreakdownTol * norm2(Ap) * norm2(ps) || !std::isfinite(denom)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    const double alpha = rz / denom;
    if (!std::isfinite(alpha)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    axpy(alpha, p, u);
    axpy(-alpha, Ap, r);
    axpy(-alpha, Atps, rs);
    z = B_apply(r);
    zs = Bt_apply(rs);
    const double rnorm = norm2(r);

    tr.alphas.push_back(alpha);
    tr.iterates.push_back(u);
    tr.precond_residuals.push_back(z);
    tr.dual_precond_residuals.push_back(zs);
    tr.residual_norms.push_back(rnorm);

    if (tol > 0.0 && rnorm <= tol * fnorm) {
      tr.stop_reason = KrylovTrace::StopReason::tolerance;
      return tr;
    }
    const double rz_new = dot(r, zs);
    if (std::abs(rz_new) < kBreakdownTol * norm2(r) * norm2(zs) || !std::isfinite(rz_new)) {
      tr.stop_reason = KrylovTrace::StopReason::breakdown;
      return tr;
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    Vector pn = z;
    axpy(beta, p, pn);
    p = std::move(pn);
    Vector psn = zs;
    axpy(beta, ps, psn);
    ps = std::move(psn);
    tr.betas.push_back(beta);
    tr.directions.push_back(p);
    tr.dual_directions.push_back(ps);
  }
  tr.stop_reason = KrylovTrace::StopReason::max_iter;
  return tr;
}

} // namespace krb
