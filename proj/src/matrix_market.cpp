// SPDX-License-Identifier: Apache-2.0

#include "krb/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "krb/errors.hpp"

namespace krb {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Header {
  bool coordinate = false;
  bool symmetric = false;
};

Header parse_header(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("matrix market: empty stream");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw IoError("matrix market: bad banner line");
  }
  Header h;
  const std::string f = lower(format);
  if (f == "coordinate") {
    h.coordinate = true;
  } else if (f == "array") {
    h.coordinate = false;
  } else {
    throw IoError("matrix market: unsupported format '" + format + "'");
  }
  const std::string fl = lower(field);
  if (fl != "real" && fl != "integer") {
    throw IoError("matrix market: unsupported field '" + field + "'");
  }
  const std::string sym = lower(symmetry);
  if (sym == "general") {
    h.symmetric = false;
  } else if (sym == "symmetric") {
    h.symmetric = true;
  } else {
    throw IoError("matrix market: unsupported symmetry '" + symmetry + "'");
  }
  return h;
}

std::string next_data_line(std::istream &is) {
  std::string line;
  while (std::getline(is, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return line;
  }
  throw IoError("matrix market: unexpected end of stream");
}

} // namespace

void write_matrix_market(std::ostream &os, const SparseMatrix &A, bool symmetric) {
  os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
     << "\n";
  std::size_t count = 0;
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      if (!symmetric || A.col_indices()[k] <= i) ++count;
    }
  }
  os << A.nrows() << " " << A.ncols() << " " << count << "\n";
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      const std::size_t j = A.col_indices()[k];
      if (symmetric && j > i) continue;
      os << (i + 1) << " " << (j + 1) << " " << fmt_double(A.values()[k]) << "\n";
    }
  }
}

void write_matrix_market(const std::string &path, const SparseMatrix &A, bool symmetric) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_matrix_market(os, A, symmetric);
}

SparseMatrix read_matrix_market(std::istream &is) {
  const Header h = parse_header(is);
  if (!h.coordinate) throw IoError("matrix market: expected coordinate format");
  std::istringstream sizes(next_data_line(is));
  std::size_t nrows = 0, ncols = 0, nnz = 0;
  if (!(sizes >> nrows >> ncols >> nnz)) throw IoError("matrix market: bad size line");
  std::vector<Triplet> t;
  t.reserve(h.symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::istringstream ls(next_data_line(is));
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) throw IoError("matrix market: bad entry line");
    if (i == 0 || j == 0 || i > nrows || j > ncols) throw IoError("matrix market: index out of range");
    t.push_back({i - 1, j - 1, v});
    if (h.symmetric && i != j) t.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(nrows, ncols, std::move(t));
}

SparseMatrix read_matrix_market(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return read_matrix_market(is);
}

void write_matrix_market_array(std::ostream &os, const DenseMatrix &A) {
  os << "%%MatrixMarket matrix array real general\n";
  os << A.nrows() << " " << A.ncols() << "\n";
  for (double v : A.values()) os << fmt_double(v) << "\n";
}

void write_matrix_market_array(const std::string &path, const DenseMatrix &A) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_matrix_market_array(os, A);
}

void write_matrix_market_array(const std::string &path, const Vector &v) {
  write_matrix_market_array(path, DenseMatrix(v.size(), 1, v));
}

DenseMatrix read_matrix_market_array(std::istream &is) {
  const Header h = parse_header(is);
  if (h.coordinate) throw IoError("matrix market: expected array format");
  std::istringstream sizes(next_data_line(is));
  std::size_t nrows = 0, ncols = 0;
  if (!(sizes >> nrows >> ncols)) throw IoError("matrix market: bad size line");
  std::vector<double> vals;
  vals.reserve(nrows * ncols);
  const std::size_t total = h.symmetric ? nrows * (nrows + 1) / 2 : nrows * ncols;
  for (std::size_t k = 0; k < total; ++k) {
    std::istringstream ls(next_data_line(is));
    double v = 0.0;
    if (!(ls >> v)) throw IoError("matrix market: bad array value");
    vals.push_back(v);
  }
  if (h.symmetric) {
    DenseMatrix A(nrows, ncols);
    std::size_t k = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      for (std::size_t i = j; i < nrows; ++i) {
        A(i, j) = vals[k];
        A(j, i) = vals[k];
        ++k;
      }
    }
    return A;
  }
  return DenseMatrix(nrows, ncols, std::move(vals));
}

DenseMatrix read_matrix_market_array(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return read_matrix_market_array(is);
}

Vector read_matrix_market_vector(const std::string &path) {
  const DenseMatrix A = read_matrix_market_array(path);
  if (A.ncols() != 1) throw IoError("matrix market: expected a single-column array in " + path);
  return A.values();
}

} // namespace krb
