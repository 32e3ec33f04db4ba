// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>

#include "krb/affine_operator.hpp"
#include "krb/spd_weight.hpp"

namespace krb {

struct MeshMeta {
  std::size_t nx = 0; // cells per side
  std::size_t ny = 0;
  std::size_t nv = 0; // vertices including the boundary
  double xmin = -1.0, ymin = -1.0, xmax = 1.0, ymax = 1.0;
};

struct NormMatrices {
  SparseMatrix h1_semi;
  SparseMatrix l2;
};

/// A discrete affine-parametric problem: the operator family, the load
/// vector, the coefficient map, and the norm matrices used for error
/// reporting. Generators are deterministic; equal inputs give bit-identical
/// bundles.
struct ProblemBundle {
  std::string problem_id;
  AffineOperator op;
  Vector rhs;
  ThetaMap theta;
  NormMatrices norms;
  MeshMeta mesh;
};

/// Piecewise-constant diffusion on [-1,1]^2 split into quadrants: J = 4
/// unit-coefficient stiffness terms, one per quadrant (elements assigned by
/// centroid), linear elements, homogeneous Dirichlet, load f = 10.
/// `layout[q]` maps quadrant q (SW, SE, NW, NE) to its term index.
/// n_cells_per_side must be even so the interfaces lie on mesh lines.
ProblemBundle poisson_pw2d(std::size_t n_cells_per_side,
                           const std::array<std::size_t, 4> &layout = {0, 1, 2, 3});

/// Convection-diffusion with constant divergence-free wind b = (1,-2):
/// A_1 = stiffness, A_2 = skew-symmetric convection, theta = (nu1, cos nu2).
ProblemBundle conv_diff2d(std::size_t n_cells_per_side);

/// Two-term SPD bundle with A_1 = stiffness, A_2 = mass and
/// theta = (1/nu1, nu2); the combined stiffness+mass norm plays the role of
/// a curl-norm for this surrogate. nu1 = 0 is rejected at evaluation.
ProblemBundle stiff_mass2d(std::size_t n_cells_per_side);

/// Helmholtz family: stiffness and mass with theta(mu) = (1, -mu^2);
/// indefinite once mu^2 passes the first Dirichlet eigenvalue.
ProblemBundle helmholtz2d(std::size_t n_cells_per_side);

/// Plane-strain elasticity with vector linear elements (dofs ordered
/// component-major: all x displacements, then all y), load f = (10,10);
/// a_1 = strain:strain, a_2 = div*div, theta = (nu1/(1+nu2),
/// nu1*nu2/((1+nu2)(1-2nu2))) with nu2 restricted to (0, 1/2).
ProblemBundle elasticity2d(std::size_t n_cells_per_side);

ProblemBundle make_problem(const std::string &id, std::size_t n_cells_per_side);

/// Directory export: one Matrix Market file per term plus rhs and norm
/// matrices and a JSON manifest carrying the theta-map identifier and mesh
/// metadata. import_bundle reconstructs the theta map from the identifier.
void export_bundle(const ProblemBundle &bundle, const std::string &dir);
ProblemBundle import_bundle(const std::string &dir);

} // namespace krb
