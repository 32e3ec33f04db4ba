// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the test suites. Everything here
// follows a different algorithmic path from the library code it checks:
// dense triple loops, Jacobi rotations, long-double Gaussian elimination.

#pragma once

#include <random>

#include "krb/dense_matrix.hpp"
#include "krb/sparse_matrix.hpp"

namespace krb::test {

DenseMatrix to_dense(const SparseMatrix &A);

// dense triple-loop products, independent of the library BLAS helpers
Vector dense_mv(const DenseMatrix &A, const Vector &x);
DenseMatrix dense_mm(const DenseMatrix &A, const DenseMatrix &B);
DenseMatrix dense_t(const DenseMatrix &A);

/// Gaussian elimination with partial pivoting carried out in long double,
/// plus two refinement passes. High-precision solve oracle.
Vector refined_solve(const DenseMatrix &A, const Vector &b);

/// Dense Cholesky (lower factor); throws std::runtime_error on a
/// nonpositive pivot.
DenseMatrix dense_cholesky(const DenseMatrix &A);

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
std::vector<double> jacobi_eigenvalues(DenseMatrix A);

/// Eigenvalues of the pencil (A, B) with B SPD, via the dense Cholesky
/// reduction, ascending.
std::vector<double> generalized_eigenvalues(const DenseMatrix &A, const DenseMatrix &B);

/// Singular values by one-sided Jacobi, descending.
std::vector<double> singular_values(DenseMatrix A);

/// Numerical rank: singular values above tol * max singular value.
std::size_t numerical_rank(const DenseMatrix &A, double tol = 1e-10);

/// Orthonormal basis of the column space (columns with singular value
/// above tol * max).
DenseMatrix orthonormal_range(const DenseMatrix &A, double tol = 1e-12);

/// Principal angles (radians, ascending) between the column spaces.
std::vector<double> principal_angles(const DenseMatrix &X, const DenseMatrix &Y);

// deterministic random data
Vector random_vector(std::mt19937_64 &rng, std::size_t n);
DenseMatrix random_matrix(std::mt19937_64 &rng, std::size_t nrows, std::size_t ncols);

/// Random sparse SPD matrix with a full pattern: R^t R / n + shift I.
SparseMatrix random_spd(std::mt19937_64 &rng, std::size_t n, double shift = 0.5);

/// Random nonsymmetric matrix: SPD part + skew part scaled by `skew`.
SparseMatrix random_nonsymmetric(std::mt19937_64 &rng, std::size_t n, double skew = 0.5,
                                 double shift = 0.5);

SparseMatrix dense_to_sparse(const DenseMatrix &A);

/// P1 prolongation of an interior-dof field from an n-cell mesh of
/// [-1,1]^2 to the 2n-cell refinement (diagonal split from the cell's
/// lower-left to upper-right corner, matching the generators).
Vector prolong_interior(std::size_t n_coarse, const Vector &coarse);

/// Independent P1 assembly oracle on the structured triangulation of
/// [-1,1]^2: element matrices from 3-point edge-midpoint quadrature (exact
/// for quadratics), assembled dense over interior dofs.
/// kind: "stiffness", "mass", "convection" (constant wind bx, by).
DenseMatrix reference_assembly(std::size_t n_cells, const std::string &kind, double bx = 0.0,
                               double by = 0.0);

/// Same oracle restricted to one quadrant (by element centroid):
/// 0 = SW, 1 = SE, 2 = NW, 3 = NE.
DenseMatrix reference_quadrant_stiffness(std::size_t n_cells, int quadrant);

/// Vector P1 oracle for the elasticity forms, dofs component-major:
/// kind: "eps" (strain:strain) or "div" (div*div).
DenseMatrix reference_elasticity(std::size_t n_cells, const std::string &kind);

} // namespace krb::test
