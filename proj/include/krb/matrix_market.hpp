// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "krb/dense_matrix.hpp"
#include "krb/sparse_matrix.hpp"

namespace krb {

/// Matrix Market coordinate format. With symmetric=true only the lower
/// triangle is written and the symmetric qualifier is used.
void write_matrix_market(std::ostream &os, const SparseMatrix &A, bool symmetric = false);
void write_matrix_market(const std::string &path, const SparseMatrix &A, bool symmetric = false);

SparseMatrix read_matrix_market(std::istream &is);
SparseMatrix read_matrix_market(const std::string &path);

/// Matrix Market array format (dense, column-major).
void write_matrix_market_array(std::ostream &os, const DenseMatrix &A);
void write_matrix_market_array(const std::string &path, const DenseMatrix &A);
void write_matrix_market_array(const std::string &path, const Vector &v);

DenseMatrix read_matrix_market_array(std::istream &is);
DenseMatrix read_matrix_market_array(const std::string &path);
Vector read_matrix_market_vector(const std::string &path);

} // namespace krb
