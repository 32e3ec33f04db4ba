// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "config.hpp"
#include "krb/problems.hpp"
#include "krb/reduced_model.hpp"

namespace krb::bench {

struct ExperimentResult {
  std::vector<std::size_t> m_list;
  std::vector<double> sup_error;  // per m, over the grid
  std::vector<std::size_t> model_dims;
  double setup_seconds = 0.0;
  double offline_seconds = 0.0;
  double truth_seconds = 0.0;
  double online_seconds = 0.0;
  std::string output_dir;
};

/// Full offline/online pipeline: builds the problem, the preconditioner at
/// mu0, and the reduced models; sweeps the grid against direct truth
/// solves; writes per-m CSVs (mu_1..mu_d, m, rel_error, residual_norm,
/// online_us), summary.csv (m, sup_error), timing.csv, and figure.svg.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Builds the reduced models of a config without sweeping (one per m).
std::vector<ReducedModel> build_models(const ExperimentConfig &config,
                                       const ProblemBundle &bundle,
                                       const LinearOperatorHandle &B, const SpdWeight &M);

/// Materializes the bundle named by the config.
ProblemBundle load_problem(const ExperimentConfig &config);

/// Preconditioner at theta(mu0) per the config (exact factorization or
/// component-block Cholesky).
LinearOperatorHandle build_preconditioner(const ExperimentConfig &config,
                                          const ProblemBundle &bundle);

SpdWeight weight_for(const ExperimentConfig &config, const ProblemBundle &bundle);

/// Regenerates figure.svg from the CSV files of a finished experiment.
void report_from_csv(const std::string &dir);

} // namespace krb::bench
