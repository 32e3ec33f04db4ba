// SPDX-License-Identifier: Apache-2.0

#include "krb/permutation.hpp"

#include <algorithm>
#include <queue>

#include "krb/errors.hpp"

namespace krb {

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.perm.resize(n);
  p.inverse.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.perm[i] = p.inverse[i] = i;
  return p;
}

std::size_t bandwidth(const SparseMatrix &A) {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      const std::size_t j = A.col_indices()[k];
      bw = std::max(bw, i > j ? i - j : j - i);
    }
  }
  return bw;
}

std::size_t bandwidth_permuted(const SparseMatrix &A, const Permutation &p) {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < A.nrows(); ++i) {
    const std::size_t pi = p.inverse[i];
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      const std::size_t pj = p.inverse[A.col_indices()[k]];
      bw = std::max(bw, pi > pj ? pi - pj : pj - pi);
    }
  }
  return bw;
}

namespace {

// adjacency of the symmetrized pattern, neighbor lists sorted by index
std::vector<std::vector<std::size_t>> symmetric_adjacency(const SparseMatrix &A) {
  const std::size_t n = A.nrows();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = A.row_starts()[i]; k < A.row_starts()[i + 1]; ++k) {
      const std::size_t j = A.col_indices()[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }
  for (auto &nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

// BFS levels from a root restricted to unvisited vertices; returns the last
// level (vertices at maximal distance).
std::vector<std::size_t> bfs_last_level(const std::vector<std::vector<std::size_t>> &adj,
                                        std::size_t root, std::vector<int> &mark, int tag,
                                        std::size_t *height) {
  std::vector<std::size_t> frontier{root};
  mark[root] = tag;
  std::vector<std::size_t> last = frontier;
  std::size_t levels = 0;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (std::size_t v : adj[u]) {
        if (mark[v] != tag) {
          mark[v] = tag;
          next.push_back(v);
        }
      }
    }
    if (!next.empty()) {
      last = next;
      ++levels;
    }
    frontier = std::move(next);
  }
  if (height) *height = levels;
  return last;
}

// George-Liu pseudo-peripheral vertex within the component containing start.
std::size_t pseudo_peripheral(const std::vector<std::vector<std::size_t>> &adj,
                              std::size_t start, std::vector<int> &mark, int &tag) {
  std::size_t root = start;
  std::size_t height = 0;
  bfs_last_level(adj, root, mark, ++tag, &height);
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<std::size_t> last = bfs_last_level(adj, root, mark, ++tag, &height);
    // candidate: minimum degree vertex in the deepest level
    std::size_t cand = last.front();
    for (std::size_t v : last) {
      if (adj[v].size() < adj[cand].size() || (adj[v].size() == adj[cand].size() && v < cand)) {
        cand = v;
      }
    }
    std::size_t new_height = 0;
    bfs_last_level(adj, cand, mark, ++tag, &new_height);
    if (new_height <= height) break;
    height = new_height;
    root = cand;
  }
  return root;
}

} // namespace

Permutation rcm_order(const SparseMatrix &A) {
  if (A.nrows() != A.ncols()) throw DimensionMismatch("rcm_order: matrix not square");
  const std::size_t n = A.nrows();
  const auto adj = symmetric_adjacency(A);

  std::vector<int> mark(n, 0);
  int tag = 0;
  std::vector<bool> numbered(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (numbered[seed]) continue;
    const std::size_t root = pseudo_peripheral(adj, seed, mark, tag);
    // Cuthill-McKee: BFS with neighbors visited in increasing degree order
    std::queue<std::size_t> q;
    q.push(root);
    numbered[root] = true;
    std::vector<std::size_t> nbrs;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      order.push_back(u);
      nbrs.clear();
      for (std::size_t v : adj[u]) {
        if (!numbered[v]) nbrs.push_back(v);
      }
      std::sort(nbrs.begin(), nbrs.end(), [&](std::size_t a, std::size_t b) {
        return adj[a].size() != adj[b].size() ? adj[a].size() < adj[b].size() : a < b;
      });
      for (std::size_t v : nbrs) {
        numbered[v] = true;
        q.push(v);
      }
    }
  }
  std::reverse(order.begin(), order.end());

  Permutation p;
  p.perm = std::move(order);
  p.inverse.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.inverse[p.perm[k]] = k;

  if (bandwidth_permuted(A, p) > bandwidth(A)) return Permutation::identity(n);
  return p;
}

} // namespace krb
