// SPDX-License-Identifier: Apache-2.0

#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "krb/errors.hpp"
#include "svg.hpp"

namespace krb::bench {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

double quad_form(const SparseMatrix &A, const Vector &v) { return dot(spmv(A, v), v); }

double relative_error(const std::string &norm, const Vector &err, const Vector &truth,
                      const Vector &lifted, const SparseMatrix &A_mu, const ProblemBundle &bundle,
                      const LinearOperatorHandle &B, const SpdWeight &M, const Vector &rhs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (norm == "energy") {
    const double ee = quad_form(A_mu, err);
    const double uu = quad_form(A_mu, truth);
    return (ee >= 0.0 && uu > 0.0) ? std::sqrt(ee / uu) : nan;
  }
  if (norm == "h1_semi") {
    const double uu = quad_form(bundle.norms.h1_semi, truth);
    return uu > 0.0 ? std::sqrt(quad_form(bundle.norms.h1_semi, err) / uu) : nan;
  }
  if (norm == "l2") {
    const double uu = quad_form(bundle.norms.l2, truth);
    return uu > 0.0 ? std::sqrt(quad_form(bundle.norms.l2, err) / uu) : nan;
  }
  if (norm == "combined") {
    const double uu = quad_form(bundle.norms.h1_semi, truth) + quad_form(bundle.norms.l2, truth);
    const double ee = quad_form(bundle.norms.h1_semi, err) + quad_form(bundle.norms.l2, err);
    return uu > 0.0 ? std::sqrt(ee / uu) : nan;
  }
  if (norm == "m_residual") {
    const Vector bres = B.apply(subtract(rhs, spmv(A_mu, lifted)));
    const double nbf = m_norm(M, B.apply(rhs));
    return nbf > 0.0 ? m_norm(M, bres) / nbf : nan;
  }
  return nan;
}

bool spd_problem(const std::string &id) {
  return id == "poisson_pw2d" || id == "stiff_mass2d" || id == "elasticity2d";
}

} // namespace

ProblemBundle load_problem(const ExperimentConfig &config) {
  if (!config.bundle_dir.empty()) return import_bundle(config.bundle_dir);
  return make_problem(config.problem_id, config.n_cells);
}

LinearOperatorHandle build_preconditioner(const ExperimentConfig &config,
                                          const ProblemBundle &bundle) {
  const std::vector<double> theta0 = bundle.theta(config.mu0);
  if (config.preconditioner == "block_diag") {
    if (bundle.problem_id != "elasticity2d") {
      throw ConfigError("block_diag preconditioner is defined for the component-ordered "
                        "elasticity problem only");
    }
    const SparseMatrix A0 = bundle.op.assemble(theta0);
    const std::size_t half = A0.nrows() / 2;
    return make_block_diag_preconditioner(A0, {0, half, A0.nrows()});
  }
  return make_exact_preconditioner(bundle.op, theta0, spd_problem(bundle.problem_id));
}

SpdWeight weight_for(const ExperimentConfig &config, const ProblemBundle &bundle) {
  if (config.weight == "h1_semi") return SpdWeight::matrix(bundle.norms.h1_semi);
  if (config.weight == "l2") return SpdWeight::matrix(bundle.norms.l2);
  return SpdWeight::identity();
}

std::vector<ReducedModel> build_models(const ExperimentConfig &config,
                                       const ProblemBundle &bundle,
                                       const LinearOperatorHandle &B, const SpdWeight &M) {
  std::vector<std::vector<double>> theta_instances;
  theta_instances.reserve(config.mu_instances.size());
  for (const auto &mu : config.mu_instances) theta_instances.push_back(bundle.theta(mu));

  std::vector<ReducedModel> models;
  const std::size_t m_max = *std::max_element(config.m_list.begin(), config.m_list.end());

  if (config.method == "rcgbm" || config.method == "rkbm1" || config.method == "rkbm2") {
    ReducedModel full;
    if (config.method == "rcgbm") {
      full = build_rcgbm(bundle.op, bundle.rhs, B, theta_instances[0], m_max);
    } else if (config.method == "rkbm1") {
      full = build_rkbm1(bundle.op, bundle.rhs, B, M, theta_instances[0], m_max);
    } else {
      full = build_rkbm2(bundle.op, bundle.rhs, B, theta_instances[0], bundle.rhs, m_max);
    }
    for (std::size_t m : config.m_list) {
      models.push_back(m >= full.dim() ? full : truncated(full, m));
    }
  } else {
    MultiMode mode = MultiMode::mrcgbm;
    if (config.method == "mrkbm1") mode = MultiMode::mrkbm1;
    if (config.method == "mrkbm2") mode = MultiMode::mrkbm2;
    for (std::size_t m : config.m_list) {
      models.push_back(
          build_multi(bundle.op, bundle.rhs, B, M, theta_instances, m, mode, config.drop_tol));
    }
  }
  return models;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  validate(config);
  ExperimentResult result;
  result.m_list = config.m_list;
  result.output_dir = config.output_dir;
  fs::create_directories(config.output_dir);

  auto t0 = Clock::now();
  const ProblemBundle bundle = load_problem(config);
  result.setup_seconds = seconds_since(t0);

  t0 = Clock::now();
  const LinearOperatorHandle B = build_preconditioner(config, bundle);
  const SpdWeight M = weight_for(config, bundle);
  const std::vector<ReducedModel> models = build_models(config, bundle, B, M);
  result.offline_seconds = seconds_since(t0);
  for (const auto &model : models) result.model_dims.push_back(model.dim());

  const std::vector<std::vector<double>> grid = expand_grid(config.grid);
  const std::size_t d = config.mu0.size();

  // one factorization pattern for every truth solve; numeric refactor per mu
  struct Row {
    std::vector<double> mu;
    double rel_error;
    double residual;
    long online_us;
  };
  std::vector<std::vector<Row>> rows(models.size());

  std::unique_ptr<Factorization> truth_factor;
  for (const auto &mu : grid) {
    const std::vector<double> theta = bundle.theta(mu);
    const SparseMatrix A_mu = bundle.op.assemble(theta);

    auto t_truth = Clock::now();
    if (!truth_factor) {
      truth_factor = std::make_unique<Factorization>(
          spd_problem(bundle.problem_id) ? Factorization::cholesky(A_mu)
                                         : Factorization::lu(A_mu));
    } else {
      truth_factor->refactor(A_mu);
    }
    const Vector truth = truth_factor->solve(bundle.rhs);
    result.truth_seconds += seconds_since(t_truth);

    for (std::size_t im = 0; im < models.size(); ++im) {
      Row row;
      row.mu = mu;
      try {
        double residual = 0.0;
        const auto t_online = Clock::now();
        const Vector coords = online_coords(models[im], theta, &residual);
        const double online_s = seconds_since(t_online);
        result.online_seconds += online_s;
        const Vector lifted = dense_matvec(models[im].P, coords);
        const Vector err = subtract(truth, lifted);
        row.rel_error =
            relative_error(config.norm, err, truth, lifted, A_mu, bundle, B, M, bundle.rhs);
        row.residual = residual;
        row.online_us = config.record_timing ? std::lround(online_s * 1e6) : 0;
      } catch (const Error &) {
        row.rel_error = std::numeric_limits<double>::quiet_NaN();
        row.residual = std::numeric_limits<double>::quiet_NaN();
        row.online_us = 0;
      }
      rows[im].push_back(std::move(row));
    }
  }

  // per-m CSVs, summary, timing, figure
  std::vector<PlotSeries> series;
  for (std::size_t im = 0; im < models.size(); ++im) {
    const std::size_t m = config.m_list[im];
    std::ofstream os(fs::path(config.output_dir) / ("errors_m" + std::to_string(m) + ".csv"));
    for (std::size_t a = 0; a < d; ++a) os << "mu_" << (a + 1) << ",";
    os << "m,rel_error,residual_norm,online_us\n";
    double sup = 0.0;
    PlotSeries ps;
    ps.label = "m = " + std::to_string(m);
    for (const Row &row : rows[im]) {
      for (double v : row.mu) os << fmt(v) << ",";
      os << m << "," << fmt(row.rel_error) << "," << fmt(row.residual) << "," << row.online_us
         << "\n";
      if (std::isfinite(row.rel_error)) sup = std::max(sup, row.rel_error);
      ps.y.push_back(row.rel_error > 0.0 ? std::log10(row.rel_error)
                                         : std::numeric_limits<double>::quiet_NaN());
    }
    result.sup_error.push_back(sup);
    series.push_back(std::move(ps));
  }
  {
    std::ofstream os(fs::path(config.output_dir) / "summary.csv");
    os << "m,model_dim,sup_error\n";
    for (std::size_t im = 0; im < models.size(); ++im) {
      os << config.m_list[im] << "," << result.model_dims[im] << "," << fmt(result.sup_error[im])
         << "\n";
    }
  }
  if (config.record_timing) {
    std::ofstream os(fs::path(config.output_dir) / "timing.csv");
    os << "stage,seconds\n";
    os << "setup," << fmt(result.setup_seconds) << "\n";
    os << "offline," << fmt(result.offline_seconds) << "\n";
    os << "truth," << fmt(result.truth_seconds) << "\n";
    os << "online," << fmt(result.online_seconds) << "\n";
  }
  write_line_plot((fs::path(config.output_dir) / "figure.svg").string(),
                  bundle.problem_id + " / " + config.method, "parameter index (lexicographic)",
                  "log10 relative error (" + config.norm + ")", series);
  return result;
}

void report_from_csv(const std::string &dir) {
  std::vector<PlotSeries> series;
  std::vector<std::pair<long, fs::path>> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("errors_m", 0) == 0 && entry.path().extension() == ".csv") {
      files.emplace_back(std::stol(name.substr(8)), entry.path());
    }
  }
  if (files.empty()) throw IoError("no errors_m*.csv files in " + dir);
  std::sort(files.begin(), files.end());
  for (const auto &[m, path] : files) {
    std::ifstream is(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty csv " + path.string());
    // rel_error column position from the header
    std::size_t col = 0, target = 0;
    {
      std::istringstream hs(line);
      std::string field;
      while (std::getline(hs, field, ',')) {
        if (field == "rel_error") target = col;
        ++col;
      }
    }
    PlotSeries ps;
    ps.label = "m = " + std::to_string(m);
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string field;
      for (std::size_t cq = 0; cq <= target; ++cq) std::getline(ls, field, ',');
      const double v = std::strtod(field.c_str(), nullptr);
      ps.y.push_back(v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN());
    }
    series.push_back(std::move(ps));
  }
  write_line_plot((fs::path(dir) / "figure.svg").string(), fs::path(dir).filename().string(),
                  "parameter index (lexicographic)", "log10 relative error", series);
}

} // namespace krb::bench
