// SPDX-License-Identifier: Apache-2.0

#include "krb/persistence.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "krb/errors.hpp"

namespace krb {

namespace {

using nlohmann::json;

static_assert(sizeof(double) == 8);

void append_doubles(std::vector<std::uint8_t> &buf, const std::vector<double> &vals) {
  for (double v : vals) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    for (int b = 0; b < 8; ++b) buf.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
}

std::vector<double> read_doubles(const std::vector<std::uint8_t> &buf, std::size_t offset,
                                 std::size_t count) {
  if (offset + 8 * count > buf.size()) {
    throw PayloadSizeMismatch("payload ends before block at offset " + std::to_string(offset));
  }
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(buf[offset + 8 * i + b]) << (8 * b);
    }
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    std::memcpy(&vals[i], &bits, 8);
  }
  return vals;
}

std::uint64_t fnv1a(const std::vector<std::uint8_t> &data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string variant_name(ReducedModel::Variant v) {
  switch (v) {
  case ReducedModel::Variant::galerkin: return "galerkin";
  case ReducedModel::Variant::least_squares: return "least_squares";
  case ReducedModel::Variant::petrov_galerkin: return "petrov_galerkin";
  }
  return "galerkin";
}

ReducedModel::Variant variant_from_name(const std::string &s) {
  if (s == "galerkin") return ReducedModel::Variant::galerkin;
  if (s == "least_squares") return ReducedModel::Variant::least_squares;
  if (s == "petrov_galerkin") return ReducedModel::Variant::petrov_galerkin;
  throw ManifestError("unknown model variant '" + s + "'");
}

} // namespace

void save_model(const ReducedModel &model, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::vector<std::uint8_t> payload;
  json blocks = json::array();
  auto add_block = [&](const std::string &name, std::size_t nrows, std::size_t ncols,
                       const std::vector<double> &vals) {
    blocks.push_back({{"name", name},
                      {"rows", nrows},
                      {"cols", ncols},
                      {"offset", payload.size()},
                      {"count", vals.size()}});
    append_doubles(payload, vals);
  };

  add_block("P", model.P.nrows(), model.P.ncols(), model.P.values());
  if (model.variant == ReducedModel::Variant::petrov_galerkin) {
    add_block("Q", model.Q.nrows(), model.Q.ncols(), model.Q.values());
  }
  for (std::size_t j = 0; j < model.reduced_A.size(); ++j) {
    add_block("reduced_A" + std::to_string(j), model.reduced_A[j].nrows(),
              model.reduced_A[j].ncols(), model.reduced_A[j].values());
  }
  if (!model.reduced_f.empty()) add_block("reduced_f", model.reduced_f.size(), 1, model.reduced_f);
  for (std::size_t q = 0; q < model.ls_gram.size(); ++q) {
    add_block("ls_gram" + std::to_string(q), model.ls_gram[q].nrows(), model.ls_gram[q].ncols(),
              model.ls_gram[q].values());
  }
  for (std::size_t j = 0; j < model.ls_rhs.size(); ++j) {
    add_block("ls_rhs" + std::to_string(j), model.ls_rhs[j].size(), 1, model.ls_rhs[j]);
  }
  add_block("bf_m_norm2", 1, 1, {model.bf_m_norm2});

  json meta = {{"method", model.basis_meta.method},
               {"theta_instances", model.basis_meta.theta_instances},
               {"steps_per_instance", model.basis_meta.steps_per_instance},
               {"drop_tol", model.basis_meta.drop_tol},
               {"m_orthonormal", model.basis_meta.m_orthonormal},
               {"note", model.basis_meta.note}};
  json manifest = {{"format", "krb-model"},
                   {"version", 1},
                   {"variant", variant_name(model.variant)},
                   {"J", model.J},
                   {"n", model.full_dim()},
                   {"m", model.dim()},
                   {"payload_bytes", payload.size()},
                   {"payload_hash", fnv1a(payload)},
                   {"basis_meta", meta},
                   {"blocks", blocks}};

  {
    std::ofstream os(fs::path(dir) / "payload.bin", std::ios::binary);
    if (!os) throw IoError("cannot write payload in " + dir);
    os.write(reinterpret_cast<const char *>(payload.data()),
             static_cast<std::streamsize>(payload.size()));
  }
  {
    std::ofstream os(fs::path(dir) / "manifest.json");
    if (!os) throw IoError("cannot write manifest in " + dir);
    os << manifest.dump(2) << "\n";
  }
}

ReducedModel load_model(const std::string &dir) {
  namespace fs = std::filesystem;
  json manifest;
  try {
    std::ifstream is(fs::path(dir) / "manifest.json");
    if (!is) throw ManifestError("missing manifest in " + dir);
    is >> manifest;
  } catch (const json::exception &e) {
    throw ManifestError(std::string("unreadable manifest: ") + e.what());
  }

  std::vector<std::uint8_t> payload;
  {
    std::ifstream is(fs::path(dir) / "payload.bin", std::ios::binary);
    if (!is) throw ManifestError("missing payload in " + dir);
    payload.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }

  ReducedModel model;
  std::size_t expect_bytes = 0;
  std::uint64_t expect_hash = 0;
  json blocks;
  try {
    if (manifest.at("format") != "krb-model") throw ManifestError("not a krb model manifest");
    model.variant = variant_from_name(manifest.at("variant").get<std::string>());
    model.J = manifest.at("J").get<std::size_t>();
    expect_bytes = manifest.at("payload_bytes").get<std::size_t>();
    expect_hash = manifest.at("payload_hash").get<std::uint64_t>();
    blocks = manifest.at("blocks");
    const auto &meta = manifest.at("basis_meta");
    model.basis_meta.method = meta.at("method").get<std::string>();
    model.basis_meta.theta_instances =
        meta.at("theta_instances").get<std::vector<std::vector<double>>>();
    model.basis_meta.steps_per_instance = meta.at("steps_per_instance").get<std::size_t>();
    model.basis_meta.drop_tol = meta.at("drop_tol").get<double>();
    model.basis_meta.m_orthonormal = meta.at("m_orthonormal").get<bool>();
    model.basis_meta.note = meta.at("note").get<std::string>();
  } catch (const ManifestError &) {
    throw;
  } catch (const json::exception &e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }

  if (payload.size() != expect_bytes) {
    throw PayloadSizeMismatch("payload has " + std::to_string(payload.size()) +
                              " bytes, manifest records " + std::to_string(expect_bytes));
  }
  if (fnv1a(payload) != expect_hash) {
    throw HashMismatch("payload hash does not match the manifest");
  }

  std::size_t n_ls_gram = 0;
  std::size_t n_ls_rhs = 0;
  try {
    for (const auto &b : blocks) {
      const std::string name = b.at("name").get<std::string>();
      const std::size_t rows = b.at("rows").get<std::size_t>();
      const std::size_t cols = b.at("cols").get<std::size_t>();
      const std::size_t offset = b.at("offset").get<std::size_t>();
      const std::size_t count = b.at("count").get<std::size_t>();
      if (count != rows * cols) throw ManifestError("block '" + name + "' extent mismatch");
      std::vector<double> vals = read_doubles(payload, offset, count);
      if (name == "P") {
        model.P = DenseMatrix(rows, cols, std::move(vals));
      } else if (name == "Q") {
        model.Q = DenseMatrix(rows, cols, std::move(vals));
      } else if (name.rfind("reduced_A", 0) == 0) {
        model.reduced_A.emplace_back(rows, cols, std::move(vals));
      } else if (name == "reduced_f") {
        model.reduced_f = std::move(vals);
      } else if (name.rfind("ls_gram", 0) == 0) {
        model.ls_gram.emplace_back(rows, cols, std::move(vals));
        ++n_ls_gram;
      } else if (name.rfind("ls_rhs", 0) == 0) {
        model.ls_rhs.emplace_back(std::move(vals));
        ++n_ls_rhs;
      } else if (name == "bf_m_norm2") {
        model.bf_m_norm2 = vals.at(0);
      } else {
        throw ManifestError("unknown block '" + name + "'");
      }
    }
  } catch (const Error &) {
    throw;
  } catch (const json::exception &e) {
    throw ManifestError(std::string("malformed block table: ") + e.what());
  }

  // invariant validation against the declared arity
  const bool is_ls = model.variant == ReducedModel::Variant::least_squares;
  if (is_ls) {
    if (n_ls_gram != model.J * model.J || n_ls_rhs != model.J) {
      throw ArityMismatch("manifest J = " + std::to_string(model.J) + " but found " +
                          std::to_string(n_ls_gram) + " gram blocks and " +
                          std::to_string(n_ls_rhs) + " rhs blocks");
    }
  } else {
    if (model.reduced_A.size() != model.J) {
      throw ArityMismatch("manifest J = " + std::to_string(model.J) + " but found " +
                          std::to_string(model.reduced_A.size()) + " reduced blocks");
    }
  }
  if (model.variant == ReducedModel::Variant::petrov_galerkin &&
      (model.Q.nrows() != model.P.nrows() || model.Q.ncols() != model.P.ncols())) {
    throw ManifestError("petrov_galerkin model with inconsistent Q");
  }
  const std::size_t m = model.dim();
  for (const auto &Ar : model.reduced_A) {
    if (Ar.nrows() != m || Ar.ncols() != m) throw ManifestError("reduced block shape mismatch");
  }
  for (const auto &G : model.ls_gram) {
    if (G.nrows() != m || G.ncols() != m) throw ManifestError("gram block shape mismatch");
  }
  if (manifest.at("m").get<std::size_t>() != m || manifest.at("n").get<std::size_t>() != model.full_dim()) {
    throw ManifestError("manifest dimensions disagree with payload blocks");
  }
  return model;
}

} // namespace krb
