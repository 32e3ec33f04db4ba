// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "krb/errors.hpp"

namespace krb::bench {

namespace {

const std::set<std::string> kMethods = {"rcgbm", "rkbm1", "rkbm2", "mrcgbm", "mrkbm1", "mrkbm2"};
const std::set<std::string> kNorms = {"energy", "h1_semi", "l2", "combined", "m_residual"};
const std::set<std::string> kWeights = {"identity", "h1_semi", "l2"};

constexpr double kPi = 3.14159265358979323846;

std::size_t tier_cells(char tier, std::size_t s, std::size_t m, std::size_t l) {
  switch (tier) {
  case 's': return s;
  case 'm': return m;
  case 'l': return l;
  default: throw ConfigError(std::string("unknown tier '") + tier + "' (use s, m, or l)");
  }
}

} // namespace

void validate(const ExperimentConfig &c) {
  if (c.bundle_dir.empty()) {
    if (c.problem_id.empty()) throw ConfigError("config: problem or bundle_dir required");
    if (c.n_cells < 2) throw ConfigError("config: n_cells must be at least 2");
  }
  if (kMethods.count(c.method) == 0) {
    throw ConfigError("config: unknown method '" + c.method + "'");
  }
  if (c.mu0.empty()) throw ConfigError("config: mu0 required");
  if (c.mu_instances.empty()) throw ConfigError("config: at least one mu instance required");
  const bool multi = c.method.rfind("m", 0) == 0;
  if (!multi && c.mu_instances.size() != 1) {
    throw ConfigError("config: method '" + c.method + "' takes exactly one mu instance");
  }
  for (const auto &mu : c.mu_instances) {
    if (mu.size() != c.mu0.size()) {
      throw ConfigError("config: mu instance arity differs from mu0");
    }
    if (mu == c.mu0) {
      throw ConfigError("config: mu0 must not be among the mu instances");
    }
  }
  if (c.m_list.empty()) throw ConfigError("config: m list required");
  for (std::size_t m : c.m_list) {
    if (m < 1) throw ConfigError("config: m values must be >= 1");
  }
  if (c.grid.empty()) throw ConfigError("config: parameter grid must be nonempty");
  if (expand_grid(c.grid).empty()) throw ConfigError("config: parameter grid expands to nothing");
  if (c.grid.size() != c.mu0.size()) {
    throw ConfigError("config: grid axis count differs from mu0 arity");
  }
  if (kNorms.count(c.norm) == 0) throw ConfigError("config: unknown norm '" + c.norm + "'");
  if (kWeights.count(c.weight) == 0) throw ConfigError("config: unknown weight '" + c.weight + "'");
  if (c.preconditioner != "exact" && c.preconditioner != "block_diag") {
    throw ConfigError("config: unknown preconditioner '" + c.preconditioner + "'");
  }
  if (c.workers < 1) throw ConfigError("config: workers must be >= 1");
}

std::vector<std::vector<double>> expand_grid(const std::vector<RangeSpec> &axes) {
  std::vector<std::vector<double>> values;
  for (const auto &axis : axes) {
    std::vector<double> v;
    if (axis.step == 0.0 || axis.stop == axis.start) {
      v.push_back(axis.start);
    } else {
      if ((axis.stop - axis.start) / axis.step < 0.0) {
        throw ConfigError("grid axis runs away from its stop value");
      }
      const auto count =
          static_cast<std::size_t>(std::floor((axis.stop - axis.start) / axis.step + 1e-9)) + 1;
      v.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        v.push_back(axis.start + static_cast<double>(i) * axis.step);
      }
    }
    values.push_back(std::move(v));
  }

  std::vector<std::vector<double>> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> p(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) p[a] = values[a][idx[a]];
    points.push_back(std::move(p));
    // lexicographic: advance the last axis first
    std::size_t a = axes.size();
    while (a-- > 0) {
      if (++idx[a] < values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
  }
}

std::vector<RangeSpec> parse_grid_spec(const std::string &spec) {
  std::vector<RangeSpec> axes;
  std::istringstream ss(spec);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    RangeSpec r;
    const auto c1 = axis.find(':');
    try {
      if (c1 == std::string::npos) {
        r.start = r.stop = std::stod(axis);
        r.step = 0.0;
      } else {
        const auto c2 = axis.find(':', c1 + 1);
        if (c2 == std::string::npos) throw ConfigError("grid axis needs start:step:stop");
        r.start = std::stod(axis.substr(0, c1));
        r.step = std::stod(axis.substr(c1 + 1, c2 - c1 - 1));
        r.stop = std::stod(axis.substr(c2 + 1));
      }
    } catch (const std::invalid_argument &) {
      throw ConfigError("cannot parse grid axis '" + axis + "'");
    }
    axes.push_back(r);
  }
  if (axes.empty()) throw ConfigError("empty grid spec");
  return axes;
}

ExperimentConfig config_from_json(const nlohmann::json &j) {
  ExperimentConfig c;
  try {
    if (j.contains("bundle_dir")) {
      c.bundle_dir = j.at("bundle_dir").get<std::string>();
    } else {
      const auto &p = j.at("problem");
      c.problem_id = p.at("kind").get<std::string>();
      c.n_cells = p.at("n").get<std::size_t>();
    }
    c.method = j.at("method").get<std::string>();
    c.mu0 = j.at("mu0").get<std::vector<double>>();
    c.mu_instances = j.at("mu_instances").get<std::vector<std::vector<double>>>();
    if (j.at("m").is_array()) {
      c.m_list = j.at("m").get<std::vector<std::size_t>>();
    } else {
      c.m_list = {j.at("m").get<std::size_t>()};
    }
    for (const auto &axis : j.at("grid")) {
      RangeSpec r;
      r.start = axis.at("start").get<double>();
      r.step = axis.value("step", 0.0);
      r.stop = axis.value("stop", r.start);
      c.grid.push_back(r);
    }
    c.norm = j.value("norm", c.norm);
    c.weight = j.value("weight", c.weight);
    c.preconditioner = j.value("preconditioner", c.preconditioner);
    c.drop_tol = j.value("drop_tol", c.drop_tol);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.record_timing = j.value("record_timing", c.record_timing);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig &c) {
  nlohmann::json j;
  if (!c.bundle_dir.empty()) {
    j["bundle_dir"] = c.bundle_dir;
  } else {
    j["problem"] = {{"kind", c.problem_id}, {"n", c.n_cells}};
  }
  j["method"] = c.method;
  j["mu0"] = c.mu0;
  j["mu_instances"] = c.mu_instances;
  j["m"] = c.m_list;
  j["grid"] = nlohmann::json::array();
  for (const auto &axis : c.grid) {
    j["grid"].push_back({{"start", axis.start}, {"step", axis.step}, {"stop", axis.stop}});
  }
  j["norm"] = c.norm;
  j["weight"] = c.weight;
  j["preconditioner"] = c.preconditioner;
  j["drop_tol"] = c.drop_tol;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["record_timing"] = c.record_timing;
  j["output_dir"] = c.output_dir;
  return j;
}

std::vector<std::string> preset_names() {
  return {"stiffmass-rcgbm", "convdiff-rkbm1", "convdiff-rkbm2",
          "elasticity-rcgbm", "elasticity-mrcgbm", "pwcoeff-rcgbm", "pwcoeff-mrcgbm"};
}

ExperimentConfig preset(const std::string &name, char tier) {
  ExperimentConfig c;
  if (name == "stiffmass-rcgbm") {
    c.problem_id = "stiff_mass2d";
    c.n_cells = tier_cells(tier, 64, 128, 256);
    c.method = "rcgbm";
    c.mu0 = {1.0, 1.0};
    c.mu_instances = {{1.0, 2.0}};
    c.m_list = {5, 10, 15};
    c.grid = {{1.0, 0.4, 3.0}, {1.0, 0.4, 3.0}};
    c.norm = "combined";
  } else if (name == "convdiff-rkbm1" || name == "convdiff-rkbm2") {
    c.problem_id = "conv_diff2d";
    c.n_cells = tier_cells(tier, 64, 128, 256);
    c.method = name == "convdiff-rkbm1" ? "rkbm1" : "rkbm2";
    c.mu0 = {1.0, kPi / 2.0};
    c.mu_instances = {{1.0, 0.0}};
    c.m_list = {10, 15, 20};
    c.grid = {{0.4, 0.4, 2.0}, {0.0, 2.0 * kPi / 5.0, 2.0 * kPi}};
    c.norm = "h1_semi";
    c.weight = "h1_semi";
  } else if (name == "elasticity-rcgbm" || name == "elasticity-mrcgbm") {
    c.problem_id = "elasticity2d";
    c.n_cells = tier_cells(tier, 32, 64, 128);
    c.mu0 = {1.0, 0.05};
    if (name == "elasticity-rcgbm") {
      c.method = "rcgbm";
      c.mu_instances = {{1.0, 0.1}};
      c.m_list = {24};
    } else {
      c.method = "mrcgbm";
      c.mu_instances = {{1.0, 0.1}, {1.0, 0.25}, {1.0, 0.3}};
      c.m_list = {4, 6, 8};
    }
    c.grid = {{1.0, 0.0, 1.0}, {0.05, 0.01, 0.3}};
    c.norm = "energy";
    c.preconditioner = "block_diag";
  } else if (name == "pwcoeff-rcgbm" || name == "pwcoeff-mrcgbm") {
    c.problem_id = "poisson_pw2d";
    c.n_cells = tier_cells(tier, 128, 256, 512);
    c.mu0 = {1.0, 1.0, 1.0, 1.0};
    if (name == "pwcoeff-rcgbm") {
      c.method = "rcgbm";
      c.mu_instances = {{1.0, 2.0, 3.0, 4.0}};
    } else {
      c.method = "mrcgbm";
      c.mu_instances = {{1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, 1.0, 4.0}, {1.0, 1.0, 2.0, 4.0}};
    }
    c.m_list = {5, 10, 15};
    c.grid = {{1.0, 1.0, 3.0}, {1.0, 1.0, 3.0}, {1.0, 1.0, 3.0}, {1.0, 1.0, 3.0}};
    c.norm = "h1_semi";
  } else {
    std::string names;
    for (const auto &p : preset_names()) names += (names.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "' (valid presets: " + names + ")");
  }
  c.output_dir = name;
  validate(c);
  return c;
}

} // namespace krb::bench
