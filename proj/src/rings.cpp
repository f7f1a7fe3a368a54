//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include "solvo/molecule.h"

namespace solvo {
namespace {
using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> cycle;  // cyclic atom order
  std::vector<int> sorted_atoms;
  EdgeSet edges;
};

bool test_bit(const EdgeSet &s, int k) {
  return (s[k / 64] >> (k % 64)) & 1U;
}

void set_bit(EdgeSet &s, int k) {
  s[k / 64] |= std::uint64_t { 1 } << (k % 64);
}

bool is_zero(const EdgeSet &s) {
  return std::all_of(s.begin(), s.end(),
                     [](std::uint64_t w) { return w == 0; });
}

int lowest_bit(const EdgeSet &s) {
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (s[w] != 0)
      return static_cast<int>(w * 64) + __builtin_ctzll(s[w]);
  }
  return -1;
}

// Rotate to start at the smallest atom and walk toward its smaller ring
// neighbor.
std::vector<int> canonical_cycle(std::vector<int> cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1])
    std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}
}  // namespace

std::vector<std::vector<int>> perceive_rings(const Molecule &mol) {
  const int n = static_cast<int>(mol.num_atoms());
  const int m = static_cast<int>(mol.num_bonds());
  const int needed = m - n + mol.num_fragments();
  if (needed <= 0)
    return {};

  const std::size_t words = (m + 63) / 64;
  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen;

  std::vector<int> dist(n), parent(n), parent_bond(n);
  std::vector<char> on_path(n);
  for (int root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(parent_bond.begin(), parent_bond.end(), -1);
    std::queue<int> queue;
    dist[root] = 0;
    queue.push(root);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (const Neighbor &nb: mol.neighbors(u)) {
        if (dist[nb.atom] >= 0)
          continue;
        dist[nb.atom] = dist[u] + 1;
        parent[nb.atom] = u;
        parent_bond[nb.atom] = nb.bond;
        queue.push(nb.atom);
      }
    }

    for (int k = 0; k < m; ++k) {
      const Bond &bd = mol.bond(k);
      int x = bd.a, y = bd.b;
      if (dist[x] < 0 || dist[y] < 0)
        continue;
      if (parent_bond[x] == k || parent_bond[y] == k)
        continue;
      // odd cycles close on an edge equidistant from the root, even ones
      // on an edge one step further away; both are covered by the
      // disjointness test below.
      std::fill(on_path.begin(), on_path.end(), 0);
      for (int u = x; u != root; u = parent[u])
        on_path[u] = 1;
      bool disjoint = true;
      for (int u = y; u != root; u = parent[u]) {
        if (on_path[u]) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint)
        continue;

      Candidate c;
      c.edges.assign(words, 0);
      std::vector<int> left;
      for (int u = x; u != root; u = parent[u]) {
        left.push_back(u);
        set_bit(c.edges, parent_bond[u]);
      }
      left.push_back(root);
      std::reverse(left.begin(), left.end());
      c.cycle = left;
      for (int u = y; u != root; u = parent[u]) {
        c.cycle.push_back(u);
        set_bit(c.edges, parent_bond[u]);
      }
      set_bit(c.edges, k);
      if (c.cycle.size() < 3 || !seen.insert(c.edges).second)
        continue;
      c.sorted_atoms = c.cycle;
      std::sort(c.sorted_atoms.begin(), c.sorted_atoms.end());
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &p, const Candidate &q) {
              if (p.cycle.size() != q.cycle.size())
                return p.cycle.size() < q.cycle.size();
              return p.sorted_atoms < q.sorted_atoms;
            });

  std::vector<std::pair<int, EdgeSet>> basis;
  std::vector<std::vector<int>> rings;
  for (const Candidate &c: candidates) {
    EdgeSet v = c.edges;
    for (const auto &[pivot, row]: basis) {
      if (test_bit(v, pivot)) {
        for (std::size_t w = 0; w < words; ++w)
          v[w] ^= row[w];
      }
    }
    if (is_zero(v))
      continue;
    basis.emplace_back(lowest_bit(v), std::move(v));
    rings.push_back(canonical_cycle(c.cycle));
    if (static_cast<int>(rings.size()) == needed)
      break;
  }
  return rings;
}
}  // namespace solvo
