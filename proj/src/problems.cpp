// SPDX-License-Identifier: Apache-2.0

#include "krb/problems.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "krb/errors.hpp"
#include "krb/matrix_market.hpp"

namespace krb {

namespace {

struct Mesh {
  std::size_t n = 0; // cells per side
  double h = 0.0;
  std::size_t ni = 0; // interior vertices per side

  explicit Mesh(std::size_t cells) : n(cells), h(2.0 / static_cast<double>(cells)), ni(cells - 1) {}

  double x(std::size_t i) const { return -1.0 + h * static_cast<double>(i); }
  bool interior(std::size_t i, std::size_t j) const { return i >= 1 && i <= ni && j >= 1 && j <= ni; }
  // interior dof index or npos for boundary vertices
  std::size_t dof(std::size_t i, std::size_t j) const {
    return interior(i, j) ? (j - 1) * ni + (i - 1) : static_cast<std::size_t>(-1);
  }
  std::size_t interior_count() const { return ni * ni; }
};

struct Tri {
  std::array<std::size_t, 3> vi; // vertex i-index
  std::array<std::size_t, 3> vj; // vertex j-index
  std::array<std::array<double, 2>, 3> grad;
  double area = 0.0;
  double cx = 0.0, cy = 0.0;
};

// Both triangles of every cell, the square split along the v00-v11 diagonal.
template <typename F> void for_each_triangle(const Mesh &mesh, F &&fn) {
  for (std::size_t cj = 0; cj < mesh.n; ++cj) {
    for (std::size_t ci = 0; ci < mesh.n; ++ci) {
      const std::array<std::array<std::size_t, 2>, 4> corner = {{
          {ci, cj}, {ci + 1, cj}, {ci + 1, cj + 1}, {ci, cj + 1}}};
      for (int t = 0; t < 2; ++t) {
        Tri tri;
        const std::array<int, 3> pick = t == 0 ? std::array<int, 3>{0, 1, 2}
                                               : std::array<int, 3>{0, 2, 3};
        double xs[3], ys[3];
        for (int a = 0; a < 3; ++a) {
          tri.vi[a] = corner[pick[a]][0];
          tri.vj[a] = corner[pick[a]][1];
          xs[a] = mesh.x(tri.vi[a]);
          ys[a] = mesh.x(tri.vj[a]);
        }
        const double two_s = (xs[1] - xs[0]) * (ys[2] - ys[0]) - (xs[2] - xs[0]) * (ys[1] - ys[0]);
        tri.area = 0.5 * two_s;
        tri.grad[0] = {(ys[1] - ys[2]) / two_s, (xs[2] - xs[1]) / two_s};
        tri.grad[1] = {(ys[2] - ys[0]) / two_s, (xs[0] - xs[2]) / two_s};
        tri.grad[2] = {(ys[0] - ys[1]) / two_s, (xs[1] - xs[0]) / two_s};
        tri.cx = (xs[0] + xs[1] + xs[2]) / 3.0;
        tri.cy = (ys[0] + ys[1] + ys[2]) / 3.0;
        fn(tri);
      }
    }
  }
}

SparseMatrix assemble_scalar(const Mesh &mesh,
                             const std::function<bool(const Tri &)> &select,
                             const std::function<double(const Tri &, int, int)> &elem) {
  std::vector<Triplet> trip;
  for_each_triangle(mesh, [&](const Tri &tri) {
    if (!select(tri)) return;
    for (int a = 0; a < 3; ++a) {
      const std::size_t ra = mesh.dof(tri.vi[a], tri.vj[a]);
      if (ra == static_cast<std::size_t>(-1)) continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t cb = mesh.dof(tri.vi[b], tri.vj[b]);
        if (cb == static_cast<std::size_t>(-1)) continue;
        trip.push_back({ra, cb, elem(tri, a, b)});
      }
    }
  });
  return SparseMatrix::from_triplets(mesh.interior_count(), mesh.interior_count(),
                                     std::move(trip));
}

double stiffness_elem(const Tri &t, int a, int b) {
  return t.area * (t.grad[a][0] * t.grad[b][0] + t.grad[a][1] * t.grad[b][1]);
}

double mass_elem(const Tri &t, int a, int b) {
  return t.area / 12.0 * (a == b ? 2.0 : 1.0);
}

SparseMatrix assemble_stiffness(const Mesh &mesh) {
  return assemble_scalar(mesh, [](const Tri &) { return true; }, stiffness_elem);
}

SparseMatrix assemble_mass(const Mesh &mesh) {
  return assemble_scalar(mesh, [](const Tri &) { return true; }, mass_elem);
}

Vector assemble_load(const Mesh &mesh, double f) {
  Vector rhs(mesh.interior_count(), 0.0);
  for_each_triangle(mesh, [&](const Tri &tri) {
    for (int a = 0; a < 3; ++a) {
      const std::size_t ra = mesh.dof(tri.vi[a], tri.vj[a]);
      if (ra != static_cast<std::size_t>(-1)) rhs[ra] += f * tri.area / 3.0;
    }
  });
  return rhs;
}

MeshMeta meta_for(const Mesh &mesh) {
  MeshMeta m;
  m.nx = mesh.n;
  m.ny = mesh.n;
  m.nv = (mesh.n + 1) * (mesh.n + 1);
  return m;
}

void require_cells(std::size_t n, std::size_t minimum, const char *who) {
  if (n < minimum) {
    throw ConfigError(std::string(who) + ": needs at least " + std::to_string(minimum) +
                      " cells per side, got " + std::to_string(n));
  }
}

ThetaMap identity_theta(std::size_t J) {
  ThetaMap t;
  t.mu_arity = J;
  t.arity = J;
  t.id = "identity";
  t.eval_fn = [J](std::span<const double> mu) {
    return std::vector<double>(mu.begin(), mu.end());
  };
  return t;
}

} // namespace

ProblemBundle poisson_pw2d(std::size_t n, const std::array<std::size_t, 4> &layout) {
  require_cells(n, 2, "poisson_pw2d");
  if (n % 2 != 0) {
    throw ConfigError("poisson_pw2d: cells per side must be even so the quadrant interfaces "
                      "lie on mesh lines");
  }
  for (std::size_t q : layout) {
    if (q >= 4) throw ConfigError("poisson_pw2d: layout entries must be in [0,4)");
  }
  const Mesh mesh(n);
  std::vector<SparseMatrix> terms(4, SparseMatrix());
  for (std::size_t term = 0; term < 4; ++term) {
    terms[term] = assemble_scalar(
        mesh,
        [&](const Tri &t) {
          const std::size_t q = (t.cx > 0.0 ? 1u : 0u) + (t.cy > 0.0 ? 2u : 0u);
          return layout[q] == term;
        },
        stiffness_elem);
  }
  ProblemBundle b{"poisson_pw2d",
                  AffineOperator(std::move(terms)),
                  assemble_load(mesh, 10.0),
                  identity_theta(4),
                  {assemble_stiffness(mesh), assemble_mass(mesh)},
                  meta_for(mesh)};
  return b;
}

ProblemBundle conv_diff2d(std::size_t n) {
  require_cells(n, 2, "conv_diff2d");
  const Mesh mesh(n);
  const double bx = 1.0, by = -2.0;
  SparseMatrix stiffness = assemble_stiffness(mesh);
  SparseMatrix convection = assemble_scalar(
      mesh, [](const Tri &) { return true; },
      [&](const Tri &t, int a, int b) {
        // (b . grad(trial_b), test_a); integral of the linear test hat is area/3
        return (bx * t.grad[b][0] + by * t.grad[b][1]) * t.area / 3.0;
      });

  ThetaMap theta;
  theta.mu_arity = 2;
  theta.arity = 2;
  theta.id = "convdiff";
  theta.eval_fn = [](std::span<const double> mu) {
    return std::vector<double>{mu[0], std::cos(mu[1])};
  };

  ProblemBundle b{"conv_diff2d",
                  AffineOperator({stiffness, std::move(convection)}),
                  assemble_load(mesh, 10.0),
                  std::move(theta),
                  {std::move(stiffness), assemble_mass(mesh)},
                  meta_for(mesh)};
  return b;
}

ProblemBundle stiff_mass2d(std::size_t n) {
  require_cells(n, 2, "stiff_mass2d");
  const Mesh mesh(n);
  SparseMatrix stiffness = assemble_stiffness(mesh);
  SparseMatrix mass = assemble_mass(mesh);

  ThetaMap theta;
  theta.mu_arity = 2;
  theta.arity = 2;
  theta.id = "inv_first";
  theta.eval_fn = [](std::span<const double> mu) {
    if (mu[0] == 0.0) throw ThetaDomainError("stiff_mass2d: nu1 must be nonzero");
    return std::vector<double>{1.0 / mu[0], mu[1]};
  };

  ProblemBundle b{"stiff_mass2d",
                  AffineOperator({stiffness, mass}),
                  assemble_load(mesh, 10.0),
                  std::move(theta),
                  {std::move(stiffness), std::move(mass)},
                  meta_for(mesh)};
  return b;
}

ProblemBundle helmholtz2d(std::size_t n) {
  require_cells(n, 2, "helmholtz2d");
  const Mesh mesh(n);
  SparseMatrix stiffness = assemble_stiffness(mesh);
  SparseMatrix mass = assemble_mass(mesh);

  ThetaMap theta;
  theta.mu_arity = 1;
  theta.arity = 2;
  theta.id = "helmholtz";
  theta.eval_fn = [](std::span<const double> mu) {
    return std::vector<double>{1.0, -mu[0] * mu[0]};
  };

  ProblemBundle b{"helmholtz2d",
                  AffineOperator({stiffness, mass}),
                  assemble_load(mesh, 10.0),
                  std::move(theta),
                  {std::move(stiffness), std::move(mass)},
                  meta_for(mesh)};
  return b;
}

ProblemBundle elasticity2d(std::size_t n) {
  require_cells(n, 2, "elasticity2d");
  const Mesh mesh(n);
  const std::size_t ni = mesh.interior_count();
  const std::size_t ndof = 2 * ni;

  std::vector<Triplet> eps_trip, div_trip;
  for_each_triangle(mesh, [&](const Tri &tri) {
    for (int a = 0; a < 3; ++a) {
      const std::size_t va = mesh.dof(tri.vi[a], tri.vj[a]);
      if (va == static_cast<std::size_t>(-1)) continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t vb = mesh.dof(tri.vi[b], tri.vj[b]);
        if (vb == static_cast<std::size_t>(-1)) continue;
        const double gab = tri.grad[a][0] * tri.grad[b][0] + tri.grad[a][1] * tri.grad[b][1];
        for (int c1 = 0; c1 < 2; ++c1) {
          for (int c2 = 0; c2 < 2; ++c2) {
            const std::size_t row = static_cast<std::size_t>(c1) * ni + va;
            const std::size_t col = static_cast<std::size_t>(c2) * ni + vb;
            const double eps = 0.5 * ((c1 == c2 ? gab : 0.0) + tri.grad[a][c2] * tri.grad[b][c1]);
            eps_trip.push_back({row, col, tri.area * eps});
            div_trip.push_back({row, col, tri.area * tri.grad[a][c1] * tri.grad[b][c2]});
          }
        }
      }
    }
  });
  SparseMatrix eps_term = SparseMatrix::from_triplets(ndof, ndof, std::move(eps_trip));
  SparseMatrix div_term = SparseMatrix::from_triplets(ndof, ndof, std::move(div_trip));

  // component-wise H1 seminorm and L2 norms (block diagonal)
  const SparseMatrix ks = assemble_stiffness(mesh);
  const SparseMatrix ms = assemble_mass(mesh);
  auto blockdiag2 = [ni](const SparseMatrix &S) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < S.nrows(); ++i) {
      for (std::size_t k = S.row_starts()[i]; k < S.row_starts()[i + 1]; ++k) {
        t.push_back({i, S.col_indices()[k], S.values()[k]});
        t.push_back({ni + i, ni + S.col_indices()[k], S.values()[k]});
      }
    }
    return SparseMatrix::from_triplets(2 * ni, 2 * ni, std::move(t));
  };

  Vector rhs(ndof, 0.0);
  const Vector load = assemble_load(mesh, 10.0);
  for (std::size_t v = 0; v < ni; ++v) {
    rhs[v] = load[v];
    rhs[ni + v] = load[v];
  }

  ThetaMap theta;
  theta.mu_arity = 2;
  theta.arity = 2;
  theta.id = "elasticity";
  theta.eval_fn = [](std::span<const double> mu) {
    const double nu1 = mu[0];
    const double nu2 = mu[1];
    if (!(nu2 > 0.0 && nu2 < 0.5)) {
      throw ThetaDomainError("elasticity2d: nu2 must lie in (0, 1/2)");
    }
    return std::vector<double>{nu1 / (1.0 + nu2), nu1 * nu2 / ((1.0 + nu2) * (1.0 - 2.0 * nu2))};
  };

  ProblemBundle b{"elasticity2d",
                  AffineOperator({std::move(eps_term), std::move(div_term)}),
                  std::move(rhs),
                  std::move(theta),
                  {blockdiag2(ks), blockdiag2(ms)},
                  meta_for(mesh)};
  return b;
}

ProblemBundle make_problem(const std::string &id, std::size_t n) {
  if (id == "poisson_pw2d") return poisson_pw2d(n);
  if (id == "conv_diff2d") return conv_diff2d(n);
  if (id == "stiff_mass2d") return stiff_mass2d(n);
  if (id == "helmholtz2d") return helmholtz2d(n);
  if (id == "elasticity2d") return elasticity2d(n);
  throw ConfigError("unknown problem '" + id +
                    "' (known: poisson_pw2d, conv_diff2d, stiff_mass2d, helmholtz2d, "
                    "elasticity2d)");
}

void export_bundle(const ProblemBundle &bundle, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (std::size_t j = 0; j < bundle.op.arity(); ++j) {
    const SparseMatrix &T = bundle.op.term(j);
    const bool sym = T.symmetry_gap() == 0.0;
    write_matrix_market((fs::path(dir) / ("term_" + std::to_string(j) + ".mtx")).string(), T, sym);
  }
  write_matrix_market_array((fs::path(dir) / "rhs.mtx").string(), bundle.rhs);
  write_matrix_market((fs::path(dir) / "h1_semi.mtx").string(), bundle.norms.h1_semi, true);
  write_matrix_market((fs::path(dir) / "l2.mtx").string(), bundle.norms.l2, true);

  nlohmann::json manifest = {
      {"format", "krb-bundle"},
      {"problem", bundle.problem_id},
      {"theta", {{"id", bundle.theta.id},
                 {"constants", bundle.theta.constants},
                 {"mu_arity", bundle.theta.mu_arity},
                 {"J", bundle.theta.arity}}},
      {"mesh", {{"nx", bundle.mesh.nx},
                {"ny", bundle.mesh.ny},
                {"nv", bundle.mesh.nv},
                {"corners", {bundle.mesh.xmin, bundle.mesh.ymin, bundle.mesh.xmax,
                             bundle.mesh.ymax}}}},
      {"terms", bundle.op.arity()}};
  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw IoError("cannot write bundle manifest in " + dir);
  os << manifest.dump(2) << "\n";
}

ProblemBundle import_bundle(const std::string &dir) {
  namespace fs = std::filesystem;
  nlohmann::json manifest;
  try {
    std::ifstream is(fs::path(dir) / "manifest.json");
    if (!is) throw ManifestError("missing bundle manifest in " + dir);
    is >> manifest;
  } catch (const nlohmann::json::exception &e) {
    throw ManifestError(std::string("unreadable bundle manifest: ") + e.what());
  }

  try {
    const std::size_t J = manifest.at("terms").get<std::size_t>();
    std::vector<SparseMatrix> terms;
    for (std::size_t j = 0; j < J; ++j) {
      terms.push_back(
          read_matrix_market((fs::path(dir) / ("term_" + std::to_string(j) + ".mtx")).string()));
    }

    ThetaMap theta;
    const auto &tj = manifest.at("theta");
    theta.id = tj.at("id").get<std::string>();
    theta.constants = tj.at("constants").get<std::vector<double>>();
    theta.mu_arity = tj.at("mu_arity").get<std::size_t>();
    theta.arity = tj.at("J").get<std::size_t>();
    if (theta.id == "identity") {
      theta.eval_fn = [](std::span<const double> mu) {
        return std::vector<double>(mu.begin(), mu.end());
      };
    } else if (theta.id == "convdiff") {
      theta.eval_fn = [](std::span<const double> mu) {
        return std::vector<double>{mu[0], std::cos(mu[1])};
      };
    } else if (theta.id == "inv_first") {
      theta.eval_fn = [](std::span<const double> mu) {
        if (mu[0] == 0.0) throw ThetaDomainError("inv_first: nu1 must be nonzero");
        return std::vector<double>{1.0 / mu[0], mu[1]};
      };
    } else if (theta.id == "helmholtz") {
      theta.eval_fn = [](std::span<const double> mu) {
        return std::vector<double>{1.0, -mu[0] * mu[0]};
      };
    } else if (theta.id == "elasticity") {
      theta.eval_fn = [](std::span<const double> mu) {
        if (!(mu[1] > 0.0 && mu[1] < 0.5)) {
          throw ThetaDomainError("elasticity: nu2 must lie in (0, 1/2)");
        }
        return std::vector<double>{mu[0] / (1.0 + mu[1]),
                                   mu[0] * mu[1] / ((1.0 + mu[1]) * (1.0 - 2.0 * mu[1]))};
      };
    } else {
      throw ManifestError("unknown theta map '" + theta.id + "'");
    }

    MeshMeta mesh;
    const auto &mj = manifest.at("mesh");
    mesh.nx = mj.at("nx").get<std::size_t>();
    mesh.ny = mj.at("ny").get<std::size_t>();
    mesh.nv = mj.at("nv").get<std::size_t>();
    const auto corners = mj.at("corners").get<std::vector<double>>();
    if (corners.size() == 4) {
      mesh.xmin = corners[0];
      mesh.ymin = corners[1];
      mesh.xmax = corners[2];
      mesh.ymax = corners[3];
    }

    ProblemBundle b{manifest.at("problem").get<std::string>(),
                    AffineOperator(std::move(terms)),
                    read_matrix_market_vector((fs::path(dir) / "rhs.mtx").string()),
                    std::move(theta),
                    {read_matrix_market((fs::path(dir) / "h1_semi.mtx").string()),
                     read_matrix_market((fs::path(dir) / "l2.mtx").string())},
                    mesh};
    return b;
  } catch (const Error &) {
    throw;
  } catch (const nlohmann::json::exception &e) {
    throw ManifestError(std::string("malformed bundle manifest: ") + e.what());
  }
}

} // namespace krb
