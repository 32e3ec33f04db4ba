// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>

#include "krb/reduced_model.hpp"

namespace krb {

/// Convergence indicators for one coefficient vector. kappa feeds the
/// conjugate-gradient bound, gamma/Gamma_cap the minimum-residual bound.
/// The estimators here are sampling-based diagnostics; certification-grade
/// values come from dense oracles on small instances.
struct Diagnostics {
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double Gamma_cap = std::numeric_limits<double>::quiet_NaN();
  double sigma_m = std::numeric_limits<double>::quiet_NaN(); // filled by aggregation
  double bound_pcg = std::numeric_limits<double>::quiet_NaN();
  double bound_gmres = std::numeric_limits<double>::quiet_NaN();
  bool gmres_bound_applicable = false;
  std::map<std::string, double> rel_error; // "energy", "m_norm", "m_residual"
};

struct DiagnosticsOptions {
  bool spd = true;            // enables the Lanczos kappa estimate
  std::size_t lanczos_steps = 50;
  std::size_t fov_samples = 200;
  std::size_t power_steps = 50;
  std::uint64_t seed = 0x5eed;
};

/// Error measures of the model at `theta` against a caller-supplied truth
/// solve, plus kappa/gamma/Gamma estimates of B A(theta) and the theorem
/// bound values at the model dimension.
Diagnostics diagnostics_for(const ReducedModel &model, const AffineOperator &op, const Vector &f,
                            const LinearOperatorHandle &B, const SpdWeight &M,
                            std::span<const double> theta, const Vector &truth,
                            const DiagnosticsOptions &opts = {});

/// sigma_m: the worst recorded relative error in the given norm.
double sup_relative_error(std::span<const Diagnostics> diags, const std::string &norm_key);

/// Extreme eigenvalues of a symmetric tridiagonal matrix by Sturm bisection
/// (diag d, off-diagonal e with e.size() == d.size()-1).
std::pair<double, double> tridiag_extreme_eigenvalues(const std::vector<double> &d,
                                                      const std::vector<double> &e);

} // namespace krb
