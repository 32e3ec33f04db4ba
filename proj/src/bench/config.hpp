// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace krb::bench {

/// One grid axis, MATLAB-style start:step:stop (step 0 means a singleton).
struct RangeSpec {
  double start = 0.0;
  double step = 0.0;
  double stop = 0.0;
};

struct ExperimentConfig {
  std::string problem_id;
  std::size_t n_cells = 0;
  std::string bundle_dir; // alternative to problem_id + n_cells

  std::string method; // rcgbm | rkbm1 | rkbm2 | mrcgbm | mrkbm1 | mrkbm2
  std::vector<double> mu0;
  std::vector<std::vector<double>> mu_instances;
  std::vector<std::size_t> m_list;
  std::vector<RangeSpec> grid;

  std::string norm = "energy";          // energy | h1_semi | l2 | combined | m_residual
  std::string weight = "identity";      // M: identity | h1_semi | l2
  std::string preconditioner = "exact"; // exact | block_diag
  double drop_tol = 1e-10;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool record_timing = true;
  std::string output_dir = "out";
};

/// Throws ConfigError on structural problems (unknown method, empty grid,
/// mu0 listed among the instances, ...).
void validate(const ExperimentConfig &config);

ExperimentConfig config_from_json(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);
nlohmann::json config_to_json(const ExperimentConfig &config);

/// Named experiment configurations at a mesh tier ('s', 'm', or 'l').
/// Unknown names raise ConfigError listing the valid names.
ExperimentConfig preset(const std::string &name, char tier = 's');
std::vector<std::string> preset_names();

/// Lexicographic expansion: the last axis varies fastest.
std::vector<std::vector<double>> expand_grid(const std::vector<RangeSpec> &axes);

/// Parses "0.4:0.4:2,0:1.25:6.28" (single numbers become singleton axes).
std::vector<RangeSpec> parse_grid_spec(const std::string &spec);

} // namespace krb::bench
