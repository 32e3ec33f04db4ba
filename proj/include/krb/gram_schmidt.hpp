// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "krb/dense_matrix.hpp"
#include "krb/spd_weight.hpp"

namespace krb {

struct OrthoResult {
  DenseMatrix basis; // M-orthonormal columns
  std::size_t rank = 0;
};

/// Modified Gram-Schmidt in the M-inner product with one reorthogonalization
/// pass. A vector is dropped when its M-norm after projection falls below
/// drop_tol times its original M-norm. An all-zero input yields rank 0.
OrthoResult gram_schmidt_m(const std::vector<Vector> &cols, const SpdWeight &M,
                           double drop_tol = 1e-10);

} // namespace krb
