// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krb::test {

DenseMatrix to_dense(const SparseMatrix &A) {
  DenseMatrix D(A.nrows(), A.ncols());
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      D(i, A.col_indices()[k]) += A.values()[k];
    }
  }
  return D;
}

Vector dense_mv(const DenseMatrix &A, const Vector &x) {
  Vector y(A.nrows(), 0.0);
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t j = 0; j < A.ncols(); ++j) y[i] += A(i, j) * x[j];
  }
  return y;
}

DenseMatrix dense_mm(const DenseMatrix &A, const DenseMatrix &B) {
  DenseMatrix C(A.nrows(), B.ncols());
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t j = 0; j < B.ncols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < A.ncols(); ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  }
  return C;
}

DenseMatrix dense_t(const DenseMatrix &A) {
  DenseMatrix T(A.ncols(), A.nrows());
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t j = 0; j < A.ncols(); ++j) T(j, i) = A(i, j);
  }
  return T;
}

Vector refined_solve(const DenseMatrix &A, const Vector &b) {
  const std::size_t n = A.nrows();
  std::vector<long double> lu(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) lu[i * n + j] = static_cast<long double>(A(i, j));
  }
  std::vector<std::size_t> piv(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(static_cast<double>(lu[i * n + k])) >
          std::abs(static_cast<double>(lu[p * n + k]))) {
        p = i;
      }
    }
    piv[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
    }
    if (lu[k * n + k] == 0.0L) throw std::runtime_error("refined_solve: singular");
    for (std::size_t i = k + 1; i < n; ++i) {
      lu[i * n + k] /= lu[k * n + k];
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= lu[i * n + k] * lu[k * n + j];
    }
  }
  auto lu_solve = [&](const std::vector<long double> &rhs) {
    std::vector<long double> x = rhs;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(x[k], x[piv[k]]);
      for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu[i * n + k] * x[k];
    }
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu[k * n + j] * x[j];
      x[k] /= lu[k * n + k];
    }
    return x;
  };

  std::vector<long double> rhs(b.begin(), b.end());
  std::vector<long double> x = lu_solve(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<long double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double s = static_cast<long double>(b[i]);
      for (std::size_t j = 0; j < n; ++j) s -= static_cast<long double>(A(i, j)) * x[j];
      r[i] = s;
    }
    const std::vector<long double> dx = lu_solve(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  }
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(x[i]);
  return out;
}

DenseMatrix dense_cholesky(const DenseMatrix &A) {
  const std::size_t n = A.nrows();
  DenseMatrix L(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0.0)) throw std::runtime_error("dense_cholesky: nonpositive pivot");
    L(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

std::vector<double> jacobi_eigenvalues(DenseMatrix A) {
  const std::size_t n = A.nrows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 1e-300;
    for (std::size_t p = 0; p < n; ++p) {
      diag = std::max(diag, std::abs(A(p, p)));
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(A(p, q)));
    }
    if (off <= 1e-14 * diag) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = A(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> generalized_eigenvalues(const DenseMatrix &A, const DenseMatrix &B) {
  const std::size_t n = A.nrows();
  const DenseMatrix L = dense_cholesky(B);
  // C = L^{-1} A L^{-t} by triangular solves
  DenseMatrix C = A;
  // forward solve on columns: L X = A
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = C(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * C(k, j);
      C(i, j) = s / L(i, i);
    }
  }
  // solve on rows: Y L^t = X, i.e. L Y^t = X^t
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = C(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(j, k) * C(i, k);
      C(i, j) = s / L(j, j);
    }
  }
  // symmetrize against roundoff
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = v;
      C(j, i) = v;
    }
  }
  return jacobi_eigenvalues(std::move(C));
}

namespace {

// one-sided Jacobi: returns the rotated matrix (columns orthogonal)
void one_sided_jacobi(DenseMatrix &A) {
  const std::size_t m = A.ncols();
  const std::size_t n = A.nrows();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          a += A(k, i) * A(k, i);
          b += A(k, j) * A(k, j);
          c += A(k, i) * A(k, j);
        }
        if (std::abs(c) <= 1e-15 * std::sqrt(a * b) || a == 0.0 || b == 0.0) continue;
        converged = false;
        const double zeta = (b - a) / (2.0 * c);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double aki = A(k, i);
          const double akj = A(k, j);
          A(k, i) = cs * aki - sn * akj;
          A(k, j) = sn * aki + cs * akj;
        }
      }
    }
    if (converged) break;
  }
}

} // namespace

std::vector<double> singular_values(DenseMatrix A) {
  one_sided_jacobi(A);
  std::vector<double> sv(A.ncols());
  for (std::size_t j = 0; j < A.ncols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.nrows(); ++i) s += A(i, j) * A(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t numerical_rank(const DenseMatrix &A, double tol) {
  const std::vector<double> sv = singular_values(A);
  if (sv.empty() || sv.front() == 0.0) return 0;
  std::size_t rank = 0;
  for (double s : sv) {
    if (s > tol * sv.front()) ++rank;
  }
  return rank;
}

DenseMatrix orthonormal_range(const DenseMatrix &A, double tol) {
  DenseMatrix R = A;
  one_sided_jacobi(R);
  std::vector<std::pair<double, std::size_t>> norms;
  for (std::size_t j = 0; j < R.ncols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < R.nrows(); ++i) s += R(i, j) * R(i, j);
    norms.emplace_back(std::sqrt(s), j);
  }
  std::sort(norms.begin(), norms.end(), std::greater<>());
  const double smax = norms.empty() ? 0.0 : norms.front().first;
  std::vector<Vector> cols;
  for (const auto &[s, j] : norms) {
    if (s <= tol * smax || s == 0.0) break;
    Vector c = R.column(j);
    for (double &v : c) v /= s;
    cols.push_back(std::move(c));
  }
  return cols.empty() ? DenseMatrix(A.nrows(), 0) : DenseMatrix::from_columns(cols);
}

std::vector<double> principal_angles(const DenseMatrix &X, const DenseMatrix &Y) {
  const DenseMatrix Qx = orthonormal_range(X);
  const DenseMatrix Qy = orthonormal_range(Y);
  const DenseMatrix C = dense_mm(dense_t(Qx), Qy);
  std::vector<double> sv = singular_values(C);
  std::vector<double> angles;
  for (double s : sv) angles.push_back(std::acos(std::clamp(s, -1.0, 1.0)));
  std::sort(angles.begin(), angles.end());
  return angles;
}

Vector random_vector(std::mt19937_64 &rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (double &x : v) x = g(rng);
  return v;
}

DenseMatrix random_matrix(std::mt19937_64 &rng, std::size_t nrows, std::size_t ncols) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix A(nrows, ncols);
  for (double &x : A.values()) x = g(rng);
  return A;
}

SparseMatrix dense_to_sparse(const DenseMatrix &A) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t j = 0; j < A.ncols(); ++j) {
      if (A(i, j) != 0.0) t.push_back({i, j, A(i, j)});
    }
  }
  return SparseMatrix::from_triplets(A.nrows(), A.ncols(), std::move(t));
}

SparseMatrix random_spd(std::mt19937_64 &rng, std::size_t n, double shift) {
  const DenseMatrix R = random_matrix(rng, n, n);
  DenseMatrix M(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += R(k, i) * R(k, j);
      M(i, j) = s / static_cast<double>(n);
    }
    M(i, i) += shift;
  }
  // exact symmetry
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) M(j, i) = M(i, j);
  }
  return dense_to_sparse(M);
}

SparseMatrix random_nonsymmetric(std::mt19937_64 &rng, std::size_t n, double skew, double shift) {
  const DenseMatrix S = to_dense(random_spd(rng, n, shift));
  const DenseMatrix R = random_matrix(rng, n, n);
  DenseMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = S(i, j) + skew * 0.5 * (R(i, j) - R(j, i));
    }
  }
  return dense_to_sparse(A);
}

Vector prolong_interior(std::size_t n_coarse, const Vector &coarse) {
  const std::size_t nic = n_coarse - 1;
  const std::size_t nf = 2 * n_coarse;
  const std::size_t nif = nf - 1;
  auto cv = [&](std::size_t i, std::size_t j) -> double {
    if (i < 1 || i > nic || j < 1 || j > nic) return 0.0;
    return coarse[(j - 1) * nic + (i - 1)];
  };
  Vector fine(nif * nif, 0.0);
  for (std::size_t j = 1; j <= nif; ++j) {
    for (std::size_t i = 1; i <= nif; ++i) {
      double v = 0.0;
      if (i % 2 == 0 && j % 2 == 0) {
        v = cv(i / 2, j / 2);
      } else if (i % 2 == 1 && j % 2 == 0) {
        v = 0.5 * (cv((i - 1) / 2, j / 2) + cv((i + 1) / 2, j / 2));
      } else if (i % 2 == 0 && j % 2 == 1) {
        v = 0.5 * (cv(i / 2, (j - 1) / 2) + cv(i / 2, (j + 1) / 2));
      } else {
        // cell-center vertex lies on the lower-left to upper-right diagonal
        v = 0.5 * (cv((i - 1) / 2, (j - 1) / 2) + cv((i + 1) / 2, (j + 1) / 2));
      }
      fine[(j - 1) * nif + (i - 1)] = v;
    }
  }
  return fine;
}

namespace {

struct RefTri {
  long double x[3];
  long double y[3];
  std::size_t vi[3];
  std::size_t vj[3];
};

// gradients from the Vandermonde system phi = c0 + c1 x + c2 y
void ref_gradients(const RefTri &t, long double grad[3][2], long double &area) {
  const long double det = (t.x[1] - t.x[0]) * (t.y[2] - t.y[0]) -
                          (t.x[2] - t.x[0]) * (t.y[1] - t.y[0]);
  area = det / 2.0L;
  for (int a = 0; a < 3; ++a) {
    // solve [1 x0 y0; 1 x1 y1; 1 x2 y2] c = e_a by Cramer's rule
    long double rhs[3] = {0.0L, 0.0L, 0.0L};
    rhs[a] = 1.0L;
    const long double d = t.x[0] * (t.y[1] - t.y[2]) - t.y[0] * (t.x[1] - t.x[2]) +
                          (t.x[1] * t.y[2] - t.x[2] * t.y[1]);
    const long double c1 = rhs[0] * (t.y[1] - t.y[2]) + rhs[1] * (t.y[2] - t.y[0]) +
                           rhs[2] * (t.y[0] - t.y[1]);
    const long double c2 = rhs[0] * (t.x[2] - t.x[1]) + rhs[1] * (t.x[0] - t.x[2]) +
                           rhs[2] * (t.x[1] - t.x[0]);
    grad[a][0] = c1 / d;
    grad[a][1] = c2 / d;
  }
}

template <typename F> void ref_triangles(std::size_t n, F &&fn) {
  const long double h = 2.0L / static_cast<long double>(n);
  for (std::size_t cj = 0; cj < n; ++cj) {
    for (std::size_t ci = 0; ci < n; ++ci) {
      const long double x0 = -1.0L + h * static_cast<long double>(ci);
      const long double y0 = -1.0L + h * static_cast<long double>(cj);
      RefTri t1{{x0, x0 + h, x0 + h},
                {y0, y0, y0 + h},
                {ci, ci + 1, ci + 1},
                {cj, cj, cj + 1}};
      RefTri t2{{x0, x0 + h, x0},
                {y0, y0 + h, y0 + h},
                {ci, ci + 1, ci},
                {cj, cj + 1, cj + 1}};
      fn(t1);
      fn(t2);
    }
  }
}

std::size_t ref_dof(std::size_t n, std::size_t i, std::size_t j) {
  if (i < 1 || i > n - 1 || j < 1 || j > n - 1) return static_cast<std::size_t>(-1);
  return (j - 1) * (n - 1) + (i - 1);
}

// basis values at the three edge midpoints (rows: midpoint, cols: basis)
constexpr long double kMidVals[3][3] = {{0.5L, 0.5L, 0.0L},
                                        {0.0L, 0.5L, 0.5L},
                                        {0.5L, 0.0L, 0.5L}};

} // namespace

DenseMatrix reference_assembly(std::size_t n, const std::string &kind, double bx, double by) {
  const std::size_t ni = (n - 1) * (n - 1);
  DenseMatrix A(ni, ni);
  ref_triangles(n, [&](const RefTri &t) {
    long double grad[3][2];
    long double area = 0.0L;
    ref_gradients(t, grad, area);
    const long double w = area / 3.0L; // midpoint rule weight
    for (int a = 0; a < 3; ++a) {
      const std::size_t ra = ref_dof(n, t.vi[a], t.vj[a]);
      if (ra == static_cast<std::size_t>(-1)) continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t cb = ref_dof(n, t.vi[b], t.vj[b]);
        if (cb == static_cast<std::size_t>(-1)) continue;
        long double val = 0.0L;
        for (int q = 0; q < 3; ++q) {
          if (kind == "stiffness") {
            val += w * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]) / 3.0L * 3.0L;
          } else if (kind == "mass") {
            val += w * kMidVals[q][a] * kMidVals[q][b];
          } else if (kind == "convection") {
            val += w * (static_cast<long double>(bx) * grad[b][0] +
                        static_cast<long double>(by) * grad[b][1]) *
                   kMidVals[q][a];
          }
        }
        if (kind == "stiffness") val /= 3.0L; // constant integrand summed three times
        A(ra, cb) += static_cast<double>(val);
      }
    }
  });
  return A;
}

DenseMatrix reference_quadrant_stiffness(std::size_t n, int quadrant) {
  const std::size_t ni = (n - 1) * (n - 1);
  DenseMatrix A(ni, ni);
  ref_triangles(n, [&](const RefTri &t) {
    const long double cx = (t.x[0] + t.x[1] + t.x[2]) / 3.0L;
    const long double cy = (t.y[0] + t.y[1] + t.y[2]) / 3.0L;
    const int q = (cx > 0.0L ? 1 : 0) + (cy > 0.0L ? 2 : 0);
    if (q != quadrant) return;
    long double grad[3][2];
    long double area = 0.0L;
    ref_gradients(t, grad, area);
    for (int a = 0; a < 3; ++a) {
      const std::size_t ra = ref_dof(n, t.vi[a], t.vj[a]);
      if (ra == static_cast<std::size_t>(-1)) continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t cb = ref_dof(n, t.vi[b], t.vj[b]);
        if (cb == static_cast<std::size_t>(-1)) continue;
        A(ra, cb) += static_cast<double>(area * (grad[a][0] * grad[b][0] +
                                                 grad[a][1] * grad[b][1]));
      }
    }
  });
  return A;
}

DenseMatrix reference_elasticity(std::size_t n, const std::string &kind) {
  const std::size_t ni = (n - 1) * (n - 1);
  DenseMatrix A(2 * ni, 2 * ni);
  ref_triangles(n, [&](const RefTri &t) {
    long double grad[3][2];
    long double area = 0.0L;
    ref_gradients(t, grad, area);
    for (int a = 0; a < 3; ++a) {
      const std::size_t va = ref_dof(n, t.vi[a], t.vj[a]);
      if (va == static_cast<std::size_t>(-1)) continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t vb = ref_dof(n, t.vi[b], t.vj[b]);
        if (vb == static_cast<std::size_t>(-1)) continue;
        for (int c1 = 0; c1 < 2; ++c1) {
          for (int c2 = 0; c2 < 2; ++c2) {
            // form the 2x2 gradients of u = phi_a e_c1, v = phi_b e_c2
            long double gu[2][2] = {{0.0L, 0.0L}, {0.0L, 0.0L}};
            long double gv[2][2] = {{0.0L, 0.0L}, {0.0L, 0.0L}};
            for (int d = 0; d < 2; ++d) {
              gu[d][c1] = grad[a][d];
              gv[d][c2] = grad[b][d];
            }
            long double val = 0.0L;
            if (kind == "eps") {
              for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                  const long double eu = 0.5L * (gu[r][c] + gu[c][r]);
                  const long double ev = 0.5L * (gv[r][c] + gv[c][r]);
                  val += eu * ev;
                }
              }
            } else { // div
              val = (gu[0][0] + gu[1][1]) * (gv[0][0] + gv[1][1]);
            }
            const std::size_t row = static_cast<std::size_t>(c1) * ni + va;
            const std::size_t col = static_cast<std::size_t>(c2) * ni + vb;
            A(row, col) += static_cast<double>(area * val);
          }
        }
      }
    }
  });
  return A;
}

} // namespace krb::test
