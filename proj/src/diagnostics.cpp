// SPDX-License-Identifier: Apache-2.0

#include "krb/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "krb/cholesky.hpp"
#include "krb/errors.hpp"

namespace krb {

namespace {

// Sturm count: number of eigenvalues of the tridiagonal below x.
std::size_t sturm_count(const std::vector<double> &d, const std::vector<double> &e, double x) {
  std::size_t count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double denom = q == 0.0 ? 1e-300 : q;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_eig(const std::vector<double> &d, const std::vector<double> &e, double lo, double hi,
                  std::size_t target_below) {
  // smallest x with count(x) >= target_below
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) >= target_below) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Vector random_unit(std::mt19937_64 &rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (double &x : v) x = g(rng);
  const double nv = norm2(v);
  scale(v, nv > 0.0 ? 1.0 / nv : 1.0);
  return v;
}

} // namespace

std::pair<double, double> tridiag_extreme_eigenvalues(const std::vector<double> &d,
                                                      const std::vector<double> &e) {
  if (d.empty()) throw DimensionMismatch("tridiag_extreme_eigenvalues: empty matrix");
  if (e.size() + 1 != d.size()) throw DimensionMismatch("tridiag_extreme_eigenvalues: bad sizes");
  // Gershgorin enclosure
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i < e.size()) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double lmin = bisect_eig(d, e, lo, hi, 1);
  const double lmax = bisect_eig(d, e, lo, hi, d.size());
  return {lmin, lmax};
}

Diagnostics diagnostics_for(const ReducedModel &model, const AffineOperator &op, const Vector &f,
                            const LinearOperatorHandle &B, const SpdWeight &M,
                            std::span<const double> theta, const Vector &truth,
                            const DiagnosticsOptions &opts) {
  Diagnostics diag;
  const SparseMatrix A = op.assemble(theta);
  const LinOp A_apply = [&A](const Vector &x) { return spmv(A, x); };
  const std::size_t n = op.dim();
  const std::size_t m = model.dim();

  const OnlineSolution sol = online_solve(model, theta);
  const Vector err = subtract(truth, sol.lifted);

  // energy norm, meaningful only when A(theta) is positive on the vectors
  {
    const double ee = dot(spmv(A, err), err);
    const double uu = dot(spmv(A, truth), truth);
    if (ee >= 0.0 && uu > 0.0) diag.rel_error["energy"] = std::sqrt(ee / uu);
  }
  {
    const double nu = m_norm(M, truth);
    if (nu > 0.0) diag.rel_error["m_norm"] = m_norm(M, err) / nu;
  }
  {
    const Vector bres = B.apply(subtract(f, spmv(A, sol.lifted)));
    const Vector bf = B.apply(f);
    const double nbf = m_norm(M, bf);
    if (nbf > 0.0) diag.rel_error["m_residual"] = m_norm(M, bres) / nbf;
  }

  // kappa(BA) from the conjugate-gradient Lanczos tridiagonal
  if (opts.spd) {
    const std::size_t steps = std::min(opts.lanczos_steps, n);
    const KrylovTrace tr = pcg_run(A_apply, B.apply, f, steps, 0.0);
    const std::size_t k = tr.alphas.size();
    if (k >= 1) {
      std::vector<double> d(k), e(k >= 1 ? k - 1 : 0);
      for (std::size_t i = 0; i < k; ++i) {
        d[i] = 1.0 / tr.alphas[i];
        if (i > 0) d[i] += tr.betas[i - 1] / tr.alphas[i - 1];
        if (i + 1 < k && tr.betas[i] >= 0.0) {
          e[i] = std::sqrt(tr.betas[i]) / tr.alphas[i];
        }
      }
      const auto [lmin, lmax] = tridiag_extreme_eigenvalues(d, e);
      if (lmin > 0.0 && lmax >= lmin) {
        diag.kappa = std::max(1.0, lmax / lmin);
        const double rho = (std::sqrt(diag.kappa) - 1.0) / (std::sqrt(diag.kappa) + 1.0);
        diag.bound_pcg = 2.0 * std::pow(rho, static_cast<double>(m));
      }
    }
  }

  // gamma: sampled Rayleigh quotients of BA in the M-inner product
  {
    std::mt19937_64 rng(opts.seed);
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < opts.fov_samples; ++s) {
      const Vector v = random_unit(rng, n);
      const Vector w = B.apply(A_apply(v));
      const double q = m_inner(M, w, v) / m_inner(M, v, v);
      gmin = std::min(gmin, q);
    }
    diag.gamma = gmin;
  }

  // Gamma: power iteration for the M-operator norm of BA, using a Cholesky
  // solve for M when the weight is a matrix
  {
    std::mt19937_64 rng(opts.seed + 1);
    std::unique_ptr<CholeskyFactorization> mchol;
    if (!M.is_identity()) mchol = std::make_unique<CholeskyFactorization>(M.matrix_ref());
    Vector x = random_unit(rng, n);
    double lambda = 0.0;
    for (std::size_t it = 0; it < opts.power_steps; ++it) {
      const Vector tx = B.apply(A_apply(x));
      const Vector mtx = M.apply(tx);
      // s = M^{-1} (BA)^t M (BA) x with (BA)^t = A^t B^t
      Vector s = spmv_transpose(A, B.apply_adjoint(mtx));
      if (mchol) s = mchol->solve(s);
      const double num = m_inner(M, x, s); // = |BA x|_M^2 when x is M-unit
      lambda = num / m_inner(M, x, x);
      const double ns = m_norm(M, s);
      if (!(ns > 0.0)) break;
      scale(s, 1.0 / ns);
      x = std::move(s);
    }
    diag.Gamma_cap = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }

  if (diag.gamma > 0.0 && diag.Gamma_cap > 0.0) {
    const double ratio = diag.gamma / diag.Gamma_cap;
    diag.bound_gmres = std::pow(std::max(0.0, 1.0 - ratio * ratio), 0.5 * static_cast<double>(m));
    diag.gmres_bound_applicable = true;
  }
  return diag;
}

double sup_relative_error(std::span<const Diagnostics> diags, const std::string &norm_key) {
  double sup = 0.0;
  for (const auto &d : diags) {
    const auto it = d.rel_error.find(norm_key);
    if (it != d.rel_error.end() && std::isfinite(it->second)) sup = std::max(sup, it->second);
  }
  return sup;
}

} // namespace krb
