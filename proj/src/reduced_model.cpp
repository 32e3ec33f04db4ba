// SPDX-License-Identifier: Apache-2.0

#include "krb/reduced_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "krb/errors.hpp"
#include "krb/gram_schmidt.hpp"

namespace krb {

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

/// Unit-normalized columns; vectors at roundoff scale relative to the first
/// are dropped (a converged Krylov run contributes noise directions).
std::vector<Vector> normalized_columns(const std::vector<Vector> &cols) {
  std::vector<Vector> out;
  out.reserve(cols.size());
  double scale0 = 0.0;
  for (const auto &c : cols) {
    const double nc = norm2(c);
    if (scale0 == 0.0) scale0 = nc;
    if (!(nc > 1e-15 * scale0)) continue;
    out.push_back(scaled(c, 1.0 / nc));
  }
  return out;
}

std::vector<DenseMatrix> galerkin_blocks(const AffineOperator &op, const DenseMatrix &W,
                                         const DenseMatrix &P) {
  // W^t A_j P, one spmv per basis column and term
  std::vector<DenseMatrix> blocks;
  blocks.reserve(op.arity());
  for (std::size_t j = 0; j < op.arity(); ++j) {
    DenseMatrix R(W.ncols(), P.ncols());
    for (std::size_t c = 0; c < P.ncols(); ++c) {
      const Vector Ap = spmv(op.term(j), P.column(c));
      for (std::size_t r = 0; r < W.ncols(); ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < W.nrows(); ++i) s += W(i, r) * Ap[i];
        R(r, c) = s;
      }
    }
    blocks.push_back(std::move(R));
  }
  return blocks;
}

void least_squares_blocks(const AffineOperator &op, const Vector &f,
                          const LinearOperatorHandle &B, const SpdWeight &M,
                          const DenseMatrix &P, ReducedModel &model) {
  const std::size_t J = op.arity();
  const std::size_t m = P.ncols();

  // W_j = B A_j P, column by column
  std::vector<DenseMatrix> W(J, DenseMatrix(P.nrows(), m));
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      W[j].set_column(c, B.apply(spmv(op.term(j), P.column(c))));
    }
  }
  std::vector<DenseMatrix> MW(J);
  for (std::size_t j = 0; j < J; ++j) {
    if (M.is_identity()) {
      MW[j] = W[j];
    } else {
      MW[j] = DenseMatrix(P.nrows(), m);
      for (std::size_t c = 0; c < m; ++c) MW[j].set_column(c, M.apply(W[j].column(c)));
    }
  }

  const Vector bf = B.apply(f);
  model.bf_m_norm2 = m_inner(M, bf, bf);
  model.ls_gram.assign(J * J, DenseMatrix());
  model.ls_rhs.assign(J, Vector());
  for (std::size_t j = 0; j < J; ++j) {
    model.ls_rhs[j] = dense_matvec_transpose(MW[j], bf);
    for (std::size_t k = j; k < J; ++k) {
      DenseMatrix G = dense_transpose_matmul(W[j], MW[k]);
      if (k != j) model.ls_gram[k * J + j] = dense_transpose(G);
      model.ls_gram[j * J + k] = std::move(G);
    }
  }
}

DenseMatrix assemble_reduced(const ReducedModel &model, std::span<const double> theta) {
  const std::size_t m = model.dim();
  DenseMatrix R(m, m);
  if (model.variant == ReducedModel::Variant::least_squares) {
    const std::size_t J = model.J;
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t k = 0; k < J; ++k) {
        const double w = theta[j] * theta[k];
        if (w == 0.0) continue;
        const auto &G = model.ls_gram[j * J + k];
        for (std::size_t q = 0; q < m * m; ++q) R.values()[q] += w * G.values()[q];
      }
    }
  } else {
    for (std::size_t j = 0; j < model.J; ++j) {
      const double w = theta[j];
      if (w == 0.0) continue;
      const auto &A = model.reduced_A[j];
      for (std::size_t q = 0; q < m * m; ++q) R.values()[q] += w * A.values()[q];
    }
  }
  return R;
}

Vector assemble_reduced_rhs(const ReducedModel &model, std::span<const double> theta) {
  if (model.variant != ReducedModel::Variant::least_squares) return model.reduced_f;
  Vector rhs(model.dim(), 0.0);
  for (std::size_t j = 0; j < model.J; ++j) {
    if (theta[j] == 0.0) continue;
    axpy(theta[j], model.ls_rhs[j], rhs);
  }
  return rhs;
}

std::string theta_string(std::span<const double> theta) {
  std::string s = "(";
  char buf[32];
  for (std::size_t j = 0; j < theta.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%g", theta[j]);
    s += buf;
    if (j + 1 < theta.size()) s += ", ";
  }
  return s + ")";
}

} // namespace

ReducedModel build_rcgbm(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         std::span<const double> theta1, std::size_t m) {
  const SparseMatrix A1 = op.assemble(theta1);
  const LinOp A_apply = [&A1](const Vector &x) { return spmv(A1, x); };
  const KrylovTrace tr = pcg_run(A_apply, B.apply, f, m, 0.0);

  ReducedModel model;
  model.variant = ReducedModel::Variant::galerkin;
  model.J = op.arity();
  model.P = DenseMatrix::from_columns(normalized_columns(tr.directions));
  model.reduced_A = galerkin_blocks(op, model.P, model.P);
  model.reduced_f = dense_matvec_transpose(model.P, f);
  model.basis_meta.method = "rcgbm";
  model.basis_meta.theta_instances = {to_vec(theta1)};
  model.basis_meta.steps_per_instance = m;
  if (tr.stop_reason == KrylovTrace::StopReason::breakdown) {
    model.basis_meta.note = "pcg breakdown, basis truncated to " + std::to_string(model.dim());
  }
  return model;
}

ReducedModel build_rkbm1(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         const SpdWeight &M, std::span<const double> theta1, std::size_t m) {
  const SparseMatrix A1 = op.assemble(theta1);
  const LinOp A_apply = [&A1](const Vector &x) { return spmv(A1, x); };
  const KrylovTrace tr = gmres_run(A_apply, B.apply, f, m, M, 0.0);

  ReducedModel model;
  model.variant = ReducedModel::Variant::least_squares;
  model.J = op.arity();
  model.P = DenseMatrix::from_columns(normalized_columns(tr.precond_residuals));
  least_squares_blocks(op, f, B, M, model.P, model);
  model.basis_meta.method = "rkbm1";
  model.basis_meta.theta_instances = {to_vec(theta1)};
  model.basis_meta.steps_per_instance = m;
  if (tr.stop_reason == KrylovTrace::StopReason::breakdown) {
    model.basis_meta.note = "gmres happy breakdown, basis truncated to " +
                            std::to_string(model.dim());
  }
  return model;
}

ReducedModel build_rkbm2(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         std::span<const double> theta1, const Vector &r0_star, std::size_t m) {
  const SparseMatrix A1 = op.assemble(theta1);
  const LinOp A_apply = [&A1](const Vector &x) { return spmv(A1, x); };
  const LinOp At_apply = [&A1](const Vector &x) { return spmv_transpose(A1, x); };
  const KrylovTrace tr = bicg_run(A_apply, At_apply, B.apply, B.apply_adjoint, f, r0_star, m, 0.0);

  ReducedModel model;
  model.variant = ReducedModel::Variant::petrov_galerkin;
  model.J = op.arity();
  std::vector<Vector> p = normalized_columns(tr.directions);
  std::vector<Vector> q = normalized_columns(tr.dual_directions);
  const std::size_t md = std::min(p.size(), q.size());
  p.resize(md);
  q.resize(md);
  model.P = DenseMatrix::from_columns(p);
  model.Q = DenseMatrix::from_columns(q);
  model.reduced_A = galerkin_blocks(op, model.Q, model.P);
  model.reduced_f = dense_matvec_transpose(model.Q, f);
  model.basis_meta.method = "rkbm2";
  model.basis_meta.theta_instances = {to_vec(theta1)};
  model.basis_meta.steps_per_instance = m;
  if (tr.stop_reason == KrylovTrace::StopReason::breakdown) {
    model.basis_meta.note = "bicg breakdown, basis truncated to " + std::to_string(model.dim());
  }
  return model;
}

ReducedModel build_multi(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         const SpdWeight &M, const std::vector<std::vector<double>> &theta_list,
                         std::size_t m, MultiMode mode, double drop_tol,
                         const std::optional<Vector> &r0_star) {
  if (theta_list.empty()) throw DimensionMismatch("build_multi: needs at least one instance");

  std::vector<Vector> pool;
  std::vector<Vector> dual_pool;
  bool any_breakdown = false;
  for (const auto &theta : theta_list) {
    const SparseMatrix Al = op.assemble(theta);
    const LinOp A_apply = [&Al](const Vector &x) { return spmv(Al, x); };
    switch (mode) {
    case MultiMode::mrcgbm: {
      const KrylovTrace tr = pcg_run(A_apply, B.apply, f, m, 0.0);
      any_breakdown |= tr.stop_reason == KrylovTrace::StopReason::breakdown;
      pool.insert(pool.end(), tr.directions.begin(), tr.directions.end());
      break;
    }
    case MultiMode::mrkbm1: {
      const KrylovTrace tr = gmres_run(A_apply, B.apply, f, m, M, 0.0);
      any_breakdown |= tr.stop_reason == KrylovTrace::StopReason::breakdown;
      pool.insert(pool.end(), tr.precond_residuals.begin(), tr.precond_residuals.end());
      break;
    }
    case MultiMode::mrkbm2: {
      const LinOp At_apply = [&Al](const Vector &x) { return spmv_transpose(Al, x); };
      const Vector rs = r0_star.value_or(f);
      const KrylovTrace tr = bicg_run(A_apply, At_apply, B.apply, B.apply_adjoint, f, rs, m, 0.0);
      any_breakdown |= tr.stop_reason == KrylovTrace::StopReason::breakdown;
      pool.insert(pool.end(), tr.precond_residuals.begin(), tr.precond_residuals.end());
      dual_pool.insert(dual_pool.end(), tr.dual_precond_residuals.begin(),
                       tr.dual_precond_residuals.end());
      break;
    }
    }
  }

  OrthoResult primal = gram_schmidt_m(pool, M, drop_tol);
  if (primal.rank == 0) throw EmptyModel("build_multi: spanning vectors have rank 0");

  ReducedModel model;
  model.J = op.arity();
  model.basis_meta.theta_instances = theta_list;
  model.basis_meta.steps_per_instance = m;
  model.basis_meta.drop_tol = drop_tol;
  model.basis_meta.m_orthonormal = true;
  if (any_breakdown) model.basis_meta.note = "one or more harvests ended in breakdown";

  switch (mode) {
  case MultiMode::mrcgbm:
    model.variant = ReducedModel::Variant::galerkin;
    model.P = std::move(primal.basis);
    model.reduced_A = galerkin_blocks(op, model.P, model.P);
    model.reduced_f = dense_matvec_transpose(model.P, f);
    model.basis_meta.method = "mrcgbm";
    break;
  case MultiMode::mrkbm1:
    model.variant = ReducedModel::Variant::least_squares;
    model.P = std::move(primal.basis);
    least_squares_blocks(op, f, B, M, model.P, model);
    model.basis_meta.method = "mrkbm1";
    break;
  case MultiMode::mrkbm2: {
    model.variant = ReducedModel::Variant::petrov_galerkin;
    // dual union orthonormalized in the Euclidean inner product; both bases
    // truncated to a common dimension so the reduced system stays square
    OrthoResult dual = gram_schmidt_m(dual_pool, SpdWeight::identity(), drop_tol);
    if (dual.rank == 0) throw EmptyModel("build_multi: dual spanning vectors have rank 0");
    const std::size_t md = std::min(primal.rank, dual.rank);
    model.P = primal.basis.top_left(primal.basis.nrows(), md);
    model.Q = dual.basis.top_left(dual.basis.nrows(), md);
    if (primal.rank != dual.rank) {
      model.basis_meta.note += std::string(model.basis_meta.note.empty() ? "" : "; ") +
                               "primal/dual ranks " + std::to_string(primal.rank) + "/" +
                               std::to_string(dual.rank) + " truncated to " + std::to_string(md);
    }
    model.reduced_A = galerkin_blocks(op, model.Q, model.P);
    model.reduced_f = dense_matvec_transpose(model.Q, f);
    model.basis_meta.method = "mrkbm2";
    break;
  }
  }
  return model;
}

Vector online_coords(const ReducedModel &model, std::span<const double> theta,
                     double *residual_norm) {
  if (theta.size() != model.J) {
    throw ArityMismatch("online_solve: theta has " + std::to_string(theta.size()) +
                        " entries, model arity is " + std::to_string(model.J));
  }
  const DenseMatrix R = assemble_reduced(model, theta);
  const Vector rhs = assemble_reduced_rhs(model, theta);
  try {
    DenseLu lu(R);
    Vector c = lu.solve(rhs);
    // one refinement pass
    Vector r = rhs;
    for (std::size_t j = 0; j < R.ncols(); ++j) {
      const double cj = c[j];
      for (std::size_t i = 0; i < R.nrows(); ++i) r[i] -= R(i, j) * cj;
    }
    const Vector dc = lu.solve(r);
    axpy(1.0, dc, c);
    if (residual_norm != nullptr) {
      if (model.variant == ReducedModel::Variant::least_squares) {
        *residual_norm = ls_residual_m_norm(model, theta, c);
      } else {
        Vector r2 = rhs;
        for (std::size_t j = 0; j < R.ncols(); ++j) {
          const double cj = c[j];
          for (std::size_t i = 0; i < R.nrows(); ++i) r2[i] -= R(i, j) * cj;
        }
        *residual_norm = norm2(r2);
      }
    }
    return c;
  } catch (const SingularReducedSystem &e) {
    double cond = 0.0;
    try {
      cond = DenseLu(assemble_reduced(model, theta)).condition_estimate();
    } catch (const SingularReducedSystem &) {
      cond = std::numeric_limits<double>::infinity();
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", cond);
    throw SingularReducedSystem("reduced system singular at theta = " + theta_string(theta) +
                                " (condition estimate " + buf + "): " + e.what());
  }
}

OnlineSolution online_solve(const ReducedModel &model, std::span<const double> theta) {
  OnlineSolution sol;
  sol.coords = online_coords(model, theta);
  sol.lifted = dense_matvec(model.P, sol.coords);
  return sol;
}

std::vector<SweepEntry> online_sweep(const ReducedModel &model,
                                     const std::vector<std::vector<double>> &theta_grid,
                                     unsigned workers) {
  std::vector<SweepEntry> out(theta_grid.size());
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        out[i].coords = online_coords(model, theta_grid[i], &out[i].residual_norm);
      } catch (const Error &) {
        out[i].coords.assign(model.dim(), std::numeric_limits<double>::quiet_NaN());
        out[i].residual_norm = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  if (workers <= 1 || theta_grid.size() < 2) {
    run_range(0, theta_grid.size());
    return out;
  }
  const std::size_t nw = std::min<std::size_t>(workers, theta_grid.size());
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t chunk = (theta_grid.size() + nw - 1) / nw;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(theta_grid.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run_range, lo, hi);
  }
  for (auto &t : pool) t.join();
  return out;
}

double ls_residual_m_norm(const ReducedModel &model, std::span<const double> theta,
                          const Vector &coords) {
  if (model.variant != ReducedModel::Variant::least_squares) {
    throw Error("ls_residual_m_norm: model is not a least-squares variant");
  }
  const DenseMatrix G = assemble_reduced(model, theta);
  const Vector h = assemble_reduced_rhs(model, theta);
  const double q = model.bf_m_norm2 - 2.0 * dot(h, coords) + dot(dense_matvec(G, coords), coords);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

ReducedModel truncated(const ReducedModel &model, std::size_t m) {
  if (m > model.dim()) throw DimensionMismatch("truncated: m exceeds model dimension");
  ReducedModel out;
  out.variant = model.variant;
  out.J = model.J;
  out.P = model.P.top_left(model.P.nrows(), m);
  if (model.Q.ncols() > 0) out.Q = model.Q.top_left(model.Q.nrows(), m);
  for (const auto &A : model.reduced_A) out.reduced_A.push_back(A.top_left(m, m));
  if (!model.reduced_f.empty()) {
    out.reduced_f.assign(model.reduced_f.begin(),
                         model.reduced_f.begin() + static_cast<std::ptrdiff_t>(m));
  }
  for (const auto &G : model.ls_gram) out.ls_gram.push_back(G.top_left(m, m));
  for (const auto &h : model.ls_rhs) {
    out.ls_rhs.emplace_back(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(m));
  }
  out.bf_m_norm2 = model.bf_m_norm2;
  out.basis_meta = model.basis_meta;
  out.basis_meta.note += std::string(out.basis_meta.note.empty() ? "" : "; ") + "truncated to " +
                         std::to_string(m);
  return out;
}

} // namespace krb
