//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <set>

#include "solvo/pattern.h"

namespace solvo {
namespace {
// Query atoms in breadth-first order from atom 0. Every atom after the
// first has an earlier anchor neighbor whose image bounds its candidates;
// the remaining back bonds are checked on extension.
struct SearchPlan {
  struct Step {
    int query_atom;
    int anchor;  // earlier query atom, -1 for the root
    int anchor_bond;
    std::vector<std::pair<int, int>> back_bonds;  // (earlier atom, query bond)
  };
  std::vector<Step> steps;
};

SearchPlan make_plan(const Pattern &p) {
  const int nq = static_cast<int>(p.num_atoms());
  std::vector<std::vector<std::pair<int, int>>> adj(nq);
  for (int k = 0; k < static_cast<int>(p.num_bonds()); ++k) {
    const QueryBond &qb = p.bond(k);
    adj[qb.a].emplace_back(qb.b, k);
    adj[qb.b].emplace_back(qb.a, k);
  }
  for (auto &list: adj)
    std::sort(list.begin(), list.end());

  SearchPlan plan;
  std::vector<int> order_of(nq, -1);
  std::vector<int> anchor(nq, -1), anchor_bond(nq, -1);
  std::vector<int> queue { 0 };
  order_of[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int q = queue[head];
    for (auto [r, k]: adj[q]) {
      if (order_of[r] >= 0)
        continue;
      order_of[r] = static_cast<int>(queue.size());
      anchor[r] = q;
      anchor_bond[r] = k;
      queue.push_back(r);
    }
  }

  for (int q: queue) {
    SearchPlan::Step step { q, anchor[q], anchor_bond[q], {} };
    for (auto [r, k]: adj[q]) {
      if (order_of[r] < order_of[q] && k != anchor_bond[q])
        step.back_bonds.emplace_back(r, k);
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

class Matcher {
public:
  Matcher(const Pattern &p, const Molecule &mol, const MatchOptions &options,
          const std::function<bool(std::span<const int>)> &visit)
      : p_(p), mol_(mol), options_(options), visit_(visit),
        plan_(make_plan(p)), mapping_(p.num_atoms(), -1),
        used_(mol.num_atoms(), 0),
        atom_ok_(p.num_atoms() * mol.num_atoms(), -1) { }

  void run() {
    if (mol_.empty())
      return;
    const int n = static_cast<int>(mol_.num_atoms());
    if (options_.root_atom >= 0) {
      if (options_.root_atom < n)
        try_root(options_.root_atom);
      return;
    }
    for (int a = 0; a < n && !stopped_; ++a)
      try_root(a);
  }

private:
  bool atom_matches(int q, int a) {
    std::int8_t &cached = atom_ok_[q * mol_.num_atoms() + a];
    if (cached < 0)
      cached = p_.atom(q).matches(mol_, a) ? 1 : 0;
    return cached == 1;
  }

  void spend() {
    if (++explored_ > options_.budget)
      throw SearchBudgetExceeded("pattern '" + p_.source()
                                 + "' exceeded the search budget of "
                                 + std::to_string(options_.budget));
  }

  void try_root(int a) {
    spend();
    int q = plan_.steps.front().query_atom;
    if (!atom_matches(q, a))
      return;
    assign(q, a);
    extend(1);
    unassign(q, a);
  }

  void assign(int q, int a) {
    mapping_[q] = a;
    used_[a] = 1;
  }

  void unassign(int q, int a) {
    mapping_[q] = -1;
    used_[a] = 0;
  }

  void extend(std::size_t depth) {
    if (stopped_)
      return;
    if (depth == plan_.steps.size()) {
      ++found_;
      if (!visit_(mapping_) || found_ >= options_.max_matches)
        stopped_ = true;
      return;
    }
    const SearchPlan::Step &step = plan_.steps[depth];
    const BondExpr &via = p_.bond(step.anchor_bond).expr;
    for (const Neighbor &nb: mol_.neighbors(mapping_[step.anchor])) {
      spend();
      int a = nb.atom;
      if (used_[a] || !via.matches(mol_.bond(nb.bond))
          || !atom_matches(step.query_atom, a))
        continue;
      bool ok = true;
      for (auto [r, k]: step.back_bonds) {
        int b = mol_.bond_between(a, mapping_[r]);
        if (b < 0 || !p_.bond(k).expr.matches(mol_.bond(b))) {
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      assign(step.query_atom, a);
      extend(depth + 1);
      unassign(step.query_atom, a);
      if (stopped_)
        return;
    }
  }

  const Pattern &p_;
  const Molecule &mol_;
  const MatchOptions &options_;
  const std::function<bool(std::span<const int>)> &visit_;
  SearchPlan plan_;
  std::vector<int> mapping_;
  std::vector<char> used_;
  std::vector<std::int8_t> atom_ok_;
  std::size_t explored_ = 0;
  std::size_t found_ = 0;
  bool stopped_ = false;
};
}  // namespace

std::size_t MatchSet::unique_atom_sets() const {
  std::set<std::vector<int>> sets;
  for (std::vector<int> m: mappings) {
    std::sort(m.begin(), m.end());
    sets.insert(std::move(m));
  }
  return sets.size();
}

void for_each_match(const Pattern &pattern, const Molecule &mol,
                    const std::function<bool(std::span<const int>)> &visit,
                    const MatchOptions &options) {
  if (options.max_matches == 0)
    return;
  Matcher(pattern, mol, options, visit).run();
}

MatchSet match(const Pattern &pattern, const Molecule &mol,
               const MatchOptions &options) {
  MatchSet result;
  for_each_match(
      pattern, mol,
      [&](std::span<const int> m) {
        result.mappings.emplace_back(m.begin(), m.end());
        return true;
      },
      options);
  result.match_count = result.mappings.size();
  result.any_match = result.match_count > 0;
  return result;
}

bool has_match(const Pattern &pattern, const Molecule &mol,
               const MatchOptions &options) {
  MatchOptions once = options;
  once.max_matches = 1;
  bool found = false;
  for_each_match(
      pattern, mol,
      [&](std::span<const int>) {
        found = true;
        return false;
      },
      once);
  return found;
}

bool matches_at(const Pattern &pattern, const Molecule &mol, int atom,
                std::size_t budget) {
  MatchOptions options;
  options.budget = budget;
  options.root_atom = atom;
  return has_match(pattern, mol, options);
}
}  // namespace solvo
