// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "../src/bench/experiment.hpp"
#include "krb/errors.hpp"
#include "krb/persistence.hpp"

namespace {

namespace fs = std::filesystem;
using namespace krb;
using namespace krb::bench;

int cmd_gen(const std::string &problem, std::size_t n, const std::string &out) {
  const ProblemBundle bundle = make_problem(problem, n);
  export_bundle(bundle, out);
  std::cout << "wrote bundle '" << problem << "' (n = " << n
            << ", dofs = " << bundle.op.dim() << ") to " << out << "\n";
  return 0;
}

int cmd_offline(const std::string &config_path) {
  const ExperimentConfig config = load_config(config_path);
  const ProblemBundle bundle = load_problem(config);
  const LinearOperatorHandle B = build_preconditioner(config, bundle);
  const SpdWeight M = weight_for(config, bundle);
  const std::vector<ReducedModel> models = build_models(config, bundle, B, M);
  fs::create_directories(config.output_dir);
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string dir =
        (fs::path(config.output_dir) / ("model_m" + std::to_string(config.m_list[i]))).string();
    save_model(models[i], dir);
    std::cout << "saved " << models[i].basis_meta.method << " model (dim " << models[i].dim()
              << ") to " << dir << "\n";
  }
  return 0;
}

int cmd_online(const std::string &model_dir, const std::string &grid_spec, const std::string &out,
               unsigned workers) {
  const ReducedModel model = load_model(model_dir);
  const auto grid = expand_grid(parse_grid_spec(grid_spec));
  for (const auto &p : grid) {
    if (p.size() != model.J) {
      throw ConfigError("grid arity " + std::to_string(p.size()) +
                        " does not match model arity " + std::to_string(model.J) +
                        " (grid axes are theta coefficients here)");
    }
  }
  const auto entries = online_sweep(model, grid, workers);

  std::ostream *os = &std::cout;
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw IoError("cannot write " + out);
    os = &file;
  }
  for (std::size_t a = 0; a < model.J; ++a) *os << "theta_" << (a + 1) << ",";
  *os << "residual_norm\n";
  char buf[40];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (double v : grid[i]) {
      std::snprintf(buf, sizeof(buf), "%.12e", v);
      *os << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.12e", entries[i].residual_norm);
    *os << buf << "\n";
  }
  return 0;
}

int cmd_experiment(const std::string &name, const std::string &tier, const std::string &out,
                   const std::string &config_path, unsigned workers, bool no_timing) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    config = load_config(config_path);
  } else {
    if (tier.size() != 1) throw ConfigError("tier must be one of s, m, l");
    config = preset(name, tier[0]);
  }
  if (!out.empty()) config.output_dir = out;
  if (workers > 0) config.workers = workers;
  if (no_timing) config.record_timing = false;

  const ExperimentResult result = run_experiment(config);
  std::cout << "experiment " << (config_path.empty() ? name : config_path) << " -> "
            << result.output_dir << "\n";
  for (std::size_t i = 0; i < result.m_list.size(); ++i) {
    std::printf("  m = %-3zu (dim %-3zu)  sup error = %.6e\n", result.m_list[i],
                result.model_dims[i], result.sup_error[i]);
  }
  std::printf("  timings: setup %.2fs offline %.2fs truth %.2fs online %.2fs\n",
              result.setup_seconds, result.offline_seconds, result.truth_seconds,
              result.online_seconds);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reduced Krylov basis methods for affine-parametric linear systems"};
  app.require_subcommand(1);

  auto *gen = app.add_subcommand("gen", "generate a problem bundle and export it");
  std::string gen_problem, gen_out = "bundle";
  std::size_t gen_n = 16;
  gen->add_option("problem", gen_problem, "problem id")->required();
  gen->add_option("--n", gen_n, "cells per side");
  gen->add_option("--out", gen_out, "output directory");

  auto *offline = app.add_subcommand("offline", "build reduced models from a JSON config");
  std::string offline_config;
  offline->add_option("--config", offline_config, "config JSON path")->required();

  auto *online = app.add_subcommand("online", "sweep a saved model over a theta grid");
  std::string online_model, online_grid, online_out;
  unsigned online_workers = 1;
  online->add_option("--model", online_model, "model directory")->required();
  online->add_option("--grid", online_grid, "grid spec, e.g. 0.4:0.4:2,0:1.25:6.3")->required();
  online->add_option("--out", online_out, "CSV output path (default stdout)");
  online->add_option("--workers", online_workers, "sweep worker threads");

  auto *experiment = app.add_subcommand("experiment", "run a preset experiment");
  std::string exp_name, exp_tier = "s", exp_out, exp_config;
  unsigned exp_workers = 0;
  bool exp_no_timing = false;
  experiment->add_option("preset", exp_name, "preset name");
  experiment->add_option("--tier", exp_tier, "mesh tier: s, m, or l");
  experiment->add_option("--out", exp_out, "output directory");
  experiment->add_option("--config", exp_config, "run a config file instead of a preset");
  experiment->add_option("--workers", exp_workers, "sweep worker threads");
  experiment->add_flag("--no-timing", exp_no_timing, "suppress timing output for byte-stable CSVs");

  auto *report = app.add_subcommand("report", "regenerate the SVG figure from experiment CSVs");
  std::string report_dir;
  report->add_option("dir", report_dir, "experiment output directory")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_problem, gen_n, gen_out);
    if (offline->parsed()) return cmd_offline(offline_config);
    if (online->parsed()) return cmd_online(online_model, online_grid, online_out, online_workers);
    if (experiment->parsed()) {
      if (exp_name.empty() && exp_config.empty()) {
        throw krb::ConfigError("experiment: preset name or --config required");
      }
      return cmd_experiment(exp_name, exp_tier, exp_out, exp_config, exp_workers, exp_no_timing);
    }
    if (report->parsed()) {
      krb::bench::report_from_csv(report_dir);
      std::cout << "wrote " << (fs::path(report_dir) / "figure.svg").string() << "\n";
      return 0;
    }
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  } catch (const krb::ConfigError &e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const krb::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
