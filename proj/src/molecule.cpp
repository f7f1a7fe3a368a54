//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/molecule.h"

#include <algorithm>
#include <numeric>
#include <queue>

#include "solvo/hash.h"

namespace solvo {
namespace {
bool aromatic_normalizable(int z) {
  return z == 6 || z == 7 || z == 8 || z == 16;
}

// A 6-ring whose bonds can be read as a strict single/double alternation
// (already aromatic bonds fit either slot).
bool alternating_six_ring(const Molecule &mol, const std::vector<int> &ring,
                          std::vector<int> &ring_bonds) {
  if (ring.size() != 6)
    return false;
  ring_bonds.clear();
  bool all_aromatic = true;
  for (std::size_t k = 0; k < 6; ++k) {
    if (!aromatic_normalizable(mol.atom(ring[k]).atomic_number))
      return false;
    int b = mol.bond_between(ring[k], ring[(k + 1) % 6]);
    ring_bonds.push_back(b);
    if (mol.bond(b).order != BondOrder::kAromatic)
      all_aromatic = false;
  }
  if (all_aromatic)
    return false;

  for (int phase = 0; phase < 2; ++phase) {
    bool ok = true;
    for (std::size_t k = 0; k < 6 && ok; ++k) {
      BondOrder order = mol.bond(ring_bonds[k]).order;
      if (order == BondOrder::kAromatic)
        continue;
      bool want_double = static_cast<int>(k % 2) == phase;
      ok = want_double ? order == BondOrder::kDouble
                       : order == BondOrder::kSingle;
    }
    if (ok)
      return true;
  }
  return false;
}
}  // namespace

int bond_valence(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    return 1;
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  }
  return 1;
}

SmilesError::SmilesError(Kind kind, std::size_t position, int detail,
                         const std::string &what)
    : std::runtime_error(what), kind_(kind), position_(position),
      detail_(detail) { }

Molecule Molecule::from_graph(std::vector<Atom> atoms,
                              std::vector<Bond> bonds) {
  Molecule mol;
  const int n = static_cast<int>(atoms.size());
  for (int i = 0; i < n; ++i) {
    atoms[i].index = i;
    if (atoms[i].implicit_h < 0 || atoms[i].explicit_h < 0)
      throw std::invalid_argument("negative hydrogen count");
  }

  std::vector<std::vector<Neighbor>> adj(n);
  for (int k = 0; k < static_cast<int>(bonds.size()); ++k) {
    const Bond &bd = bonds[k];
    if (bd.a < 0 || bd.b < 0 || bd.a >= n || bd.b >= n)
      throw std::invalid_argument("bond references a missing atom");
    if (bd.a == bd.b)
      throw std::invalid_argument("bond joins an atom to itself");
    for (const Neighbor &nb: adj[bd.a]) {
      if (nb.atom == bd.b)
        throw std::invalid_argument("duplicate bond");
    }
    if (bd.order == BondOrder::kAromatic
        && !(atoms[bd.a].is_aromatic && atoms[bd.b].is_aromatic))
      throw std::invalid_argument("aromatic bond between non-aromatic atoms");
    adj[bd.a].push_back({ bd.b, k });
    adj[bd.b].push_back({ bd.a, k });
  }

  mol.offsets_.assign(1, 0);
  for (auto &list: adj) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor &x, const Neighbor &y) {
                return x.atom < y.atom;
              });
    mol.adjacency_.insert(mol.adjacency_.end(), list.begin(), list.end());
    mol.offsets_.push_back(static_cast<int>(mol.adjacency_.size()));
  }
  mol.atoms_ = std::move(atoms);
  mol.bonds_ = std::move(bonds);
  for (Bond &bd: mol.bonds_)
    bd.in_ring = false;

  // fragments
  std::vector<int> seen(n, 0);
  mol.num_fragments_ = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    ++mol.num_fragments_;
    std::vector<int> stack { s };
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Neighbor &nb: mol.neighbors(u)) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          stack.push_back(nb.atom);
        }
      }
    }
  }

  mol.rings_ = perceive_rings(mol);
  mol.ring_membership_.assign(n, 0);
  for (const auto &ring: mol.rings_) {
    for (std::size_t k = 0; k < ring.size(); ++k) {
      ++mol.ring_membership_[ring[k]];
      int b = mol.bond_between(ring[k], ring[(k + 1) % ring.size()]);
      mol.bonds_[b].in_ring = true;
    }
  }

  // Kekule six-rings of C/N/O/S become aromatic; repeat for fused systems.
  std::vector<int> ring_bonds;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &ring: mol.rings_) {
      if (!alternating_six_ring(mol, ring, ring_bonds))
        continue;
      for (int a: ring)
        mol.atoms_[a].is_aromatic = true;
      for (int b: ring_bonds)
        mol.bonds_[b].order = BondOrder::kAromatic;
      changed = true;
    }
  }

  // Aromatic bonds only live inside rings (e.g. the biaryl bond).
  for (Bond &bd: mol.bonds_) {
    if (bd.order == BondOrder::kAromatic && !bd.in_ring)
      bd.order = BondOrder::kSingle;
  }
  return mol;
}

int Molecule::bond_between(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

int Molecule::heavy_degree(int i) const {
  int d = 0;
  for (const Neighbor &nb: neighbors(i))
    d += atoms_[nb.atom].atomic_number != 1;
  return d;
}

int Molecule::total_h(int i) const {
  int h = atoms_[i].implicit_h + atoms_[i].explicit_h;
  for (const Neighbor &nb: neighbors(i))
    h += atoms_[nb.atom].atomic_number == 1;
  return h;
}

bool Molecule::in_ring_of_size(int i, int size) const {
  if (ring_membership_[i] == 0)
    return false;
  for (const auto &ring: rings_) {
    if (static_cast<int>(ring.size()) == size
        && std::find(ring.begin(), ring.end(), i) != ring.end())
      return true;
  }
  return false;
}

std::uint64_t atom_invariant(const Molecule &mol, int i) {
  const Atom &atom = mol.atom(i);
  Fnv1a h;
  h.add_i32(atom.atomic_number);
  h.add_i32(mol.heavy_degree(i));
  h.add_i32(mol.total_h(i));
  h.add_i32(atom.formal_charge);
  h.add_byte(mol.in_ring(i) ? 1 : 0);
  h.add_byte(atom.is_aromatic ? 1 : 0);
  return h.digest();
}

Molecule add_hydrogens(const Molecule &mol) {
  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  const int n = static_cast<int>(atoms.size());
  for (int i = 0; i < n; ++i) {
    int count = atoms[i].implicit_h + atoms[i].explicit_h;
    atoms[i].implicit_h = 0;
    atoms[i].explicit_h = 0;
    for (int k = 0; k < count; ++k) {
      Atom h;
      h.atomic_number = 1;
      h.bracket = true;
      atoms.push_back(h);
      bonds.push_back(
          { i, static_cast<int>(atoms.size()) - 1, BondOrder::kSingle, false });
    }
  }
  return Molecule::from_graph(std::move(atoms), std::move(bonds));
}
}  // namespace solvo
