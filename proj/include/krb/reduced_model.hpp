// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "krb/affine_operator.hpp"
#include "krb/dense_matrix.hpp"
#include "krb/krylov.hpp"
#include "krb/linear_operator.hpp"
#include "krb/spd_weight.hpp"

namespace krb {

/// Provenance of a reduced basis: which offline method built it, at which
/// coefficient instances, with how many steps per instance.
struct BasisMeta {
  std::string method;
  std::vector<std::vector<double>> theta_instances;
  std::size_t steps_per_instance = 0;
  double drop_tol = 0.0;
  bool m_orthonormal = false; // false: unit Euclidean column norms
  std::string note;
};

/// Offline product of the reduced Krylov basis methods. Everything the
/// online stage touches is precomputed here; online solves never see the
/// full dimension n except through the final lift P c.
struct ReducedModel {
  enum class Variant { galerkin, least_squares, petrov_galerkin };

  Variant variant = Variant::galerkin;
  std::size_t J = 0;
  DenseMatrix P; // n x m trial basis
  DenseMatrix Q; // petrov_galerkin test basis, empty otherwise

  // galerkin: P^t A_j P, petrov_galerkin: Q^t A_j P
  std::vector<DenseMatrix> reduced_A;
  // galerkin: P^t f, petrov_galerkin: Q^t f
  Vector reduced_f;

  // least_squares blocks: G_{jk} = (B A_j P)^t M (B A_k P), stored row-major
  // at index j*J + k, and h_j = (B A_j P)^t M B f.
  std::vector<DenseMatrix> ls_gram;
  std::vector<Vector> ls_rhs;
  double bf_m_norm2 = 0.0; // |Bf|_M^2, completes the least-squares residual

  BasisMeta basis_meta;

  std::size_t dim() const { return P.ncols(); }
  std::size_t full_dim() const { return P.nrows(); }
};

struct OnlineSolution {
  Vector coords; // m reduced coordinates
  Vector lifted; // P * coords
};

struct SweepEntry {
  Vector coords;
  /// galerkin/petrov_galerkin: Euclidean residual of the m x m reduced
  /// system after refinement; least_squares: the model residual
  /// |Bf - BA(theta) u|_M reconstructed from the precomputed blocks.
  double residual_norm = 0.0;
};

/// Conjugate-gradient reduced basis (Galerkin). Runs PCG at theta1 and uses
/// the unit-normalized conjugate directions p_0..p_{m-1} as the basis. A
/// shorter trace (breakdown) shrinks the model instead of failing.
ReducedModel build_rcgbm(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         std::span<const double> theta1, std::size_t m);

/// GMRES reduced basis (M-norm least squares online). Harvests the
/// preconditioned residuals z_j = B(f - A u_j), j = 0..m-1.
ReducedModel build_rkbm1(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         const SpdWeight &M, std::span<const double> theta1, std::size_t m);

/// BiCG reduced basis (Petrov-Galerkin online): trial space from p_k, test
/// space from the dual directions p*_k.
ReducedModel build_rkbm2(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         std::span<const double> theta1, const Vector &r0_star, std::size_t m);

enum class MultiMode { mrcgbm, mrkbm1, mrkbm2 };

/// Multi-instance builders: one Krylov harvest per theta instance, the
/// spanning vectors pooled and reduced to a rank-safe M-orthonormal basis
/// (the pooled vectors generally do not form a basis). Reduced dimension is
/// at most L*m. Throws EmptyModel when the pool has rank zero.
ReducedModel build_multi(const AffineOperator &op, const Vector &f, const LinearOperatorHandle &B,
                         const SpdWeight &M, const std::vector<std::vector<double>> &theta_list,
                         std::size_t m, MultiMode mode, double drop_tol = 1e-10,
                         const std::optional<Vector> &r0_star = std::nullopt);

/// Reduced solve at one coefficient vector: assembles the m x m system from
/// the precomputed blocks, solves by dense LU with one refinement pass, and
/// lifts. Cost is independent of n except for the lift.
OnlineSolution online_solve(const ReducedModel &model, std::span<const double> theta);

/// online_solve without the O(n) lift.
Vector online_coords(const ReducedModel &model, std::span<const double> theta,
                     double *residual_norm = nullptr);

/// Maps online_solve over a coefficient grid in order. Per-point failures
/// are recorded as NaN coordinates and the sweep continues. `workers` > 1
/// fans points out to threads; results are ordered deterministically
/// regardless of scheduling.
std::vector<SweepEntry> online_sweep(const ReducedModel &model,
                                     const std::vector<std::vector<double>> &theta_grid,
                                     unsigned workers = 1);

/// |Bf - BA(theta) P c|_M from the least-squares blocks (no n-dim work).
double ls_residual_m_norm(const ReducedModel &model, std::span<const double> theta,
                          const Vector &coords);

/// Sub-model spanned by the first m basis columns of a single-harvest
/// model; all reduced blocks restrict to leading sub-blocks.
ReducedModel truncated(const ReducedModel &model, std::size_t m);

} // namespace krb
