// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "krb/spd_weight.hpp"
#include "krb/vector_ops.hpp"

namespace krb {

using LinOp = std::function<Vector(const Vector &)>;

/// Per-iteration record of a Krylov run. Offline builders harvest basis
/// vectors from here, so every vector the recurrences touch is kept.
///
/// Index conventions (no early stop): iterates holds u_0..u_{m-1} with
/// u_0 = 0; directions holds p_0..p_{m-1}; precond_residuals holds
/// z_0..z_{m-1}; alphas/betas hold the m-1 step scalars. On an early stop
/// the trailing entries are simply absent.
struct KrylovTrace {
  enum class Method { pcg, gmres, bicg };
  enum class StopReason { max_iter, tolerance, breakdown };

  Method method = Method::pcg;
  StopReason stop_reason = StopReason::max_iter;

  std::vector<Vector> iterates;
  std::vector<Vector> directions;             // pcg, bicg
  std::vector<Vector> dual_directions;        // bicg
  std::vector<Vector> precond_residuals;      // z_k
  std::vector<Vector> dual_precond_residuals; // bicg z*_k
  std::vector<double> alphas;
  std::vector<double> betas;
  /// pcg/bicg: Euclidean norm of the residual r_k.
  /// gmres: M-norm of the preconditioned residual B(f - A u_k), computed
  /// from the Givens recurrence so the sequence is nonincreasing.
  std::vector<double> residual_norms;
};

/// Preconditioned conjugate gradient for A u = f with preconditioner B,
/// recording directions p_0..p_{m-1}. tol = 0 runs all m-1 update steps
/// (offline harvesting must not stop early); otherwise stops once
/// |r_k| <= tol * |f|. A nonpositive (A p, p) or a nonfinite scalar stops
/// with a partial trace and StopReason::breakdown.
KrylovTrace pcg_run(const LinOp &A_apply, const LinOp &B_apply, const Vector &f, std::size_t m,
                    double tol);

/// GMRES for B A u = B f with Arnoldi in the M-inner product (modified
/// Gram-Schmidt plus one reorthogonalization pass). Iterate u_k minimizes
/// |Bf - BAu|_M over the k-dimensional Krylov space; z_k = B(f - A u_k) is
/// recorded for k = 0..m-1. Happy breakdown yields the exact solution and a
/// truncated trace.
KrylovTrace gmres_run(const LinOp &A_apply, const LinOp &B_apply, const Vector &f, std::size_t m,
                      const SpdWeight &M, double tol);

/// Bi-conjugate gradients with the dual chain driven by A^t and B^t.
/// Records both direction sequences p_k, p*_k together with z_k, z*_k.
/// Serious breakdown (vanishing (r, z*) or (A p, p*)) stops with a partial
/// trace; the caller may restart with a different r0_star.
KrylovTrace bicg_run(const LinOp &A_apply, const LinOp &At_apply, const LinOp &B_apply,
                     const LinOp &Bt_apply, const Vector &f, const Vector &r0_star, std::size_t m,
                     double tol);

} // namespace krb
