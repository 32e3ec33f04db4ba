// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "krb/sparse_matrix.hpp"

namespace krb {

/// perm[k] = original index of the k-th reordered row/column, so the
/// permuted matrix is (PAP^t)_{kl} = A_{perm[k], perm[l]}.
struct Permutation {
  std::vector<std::size_t> perm;
  std::vector<std::size_t> inverse;

  static Permutation identity(std::size_t n);
};

/// Structural bandwidth max|i-j| over stored entries.
std::size_t bandwidth(const SparseMatrix &A);

std::size_t bandwidth_permuted(const SparseMatrix &A, const Permutation &p);

/// Reverse Cuthill-McKee on the symmetrized pattern, per connected
/// component, started from a pseudo-peripheral vertex. Falls back to the
/// identity whenever RCM would not improve the bandwidth, so the result
/// never exceeds the original bandwidth.
Permutation rcm_order(const SparseMatrix &A);

} // namespace krb
