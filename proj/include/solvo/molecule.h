//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_MOLECULE_H_
#define SOLVO_MOLECULE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solvo {
enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Valence contribution of a bond; aromatic bonds count as 1 (the extra
// pi electron is accounted for per atom).
int bond_valence(BondOrder order);

struct Atom {
  int atomic_number = 0;
  int formal_charge = 0;
  int isotope = 0;  // mass number, 0 when unspecified
  int explicit_h = 0;  // hydrogens written inside a bracket atom
  int implicit_h = 0;  // hydrogens implied by the valence model
  int index = 0;
  bool is_aromatic = false;
  bool bracket = false;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Immutable molecular graph. Hydrogens are normally implicit (counts on the
// heavy atom); hydrogen atoms written as bracket atoms ("[2H]") are real
// graph atoms.
class Molecule {
public:
  Molecule() = default;

  // Validates the graph, builds adjacency, perceives rings, marks ring
  // bonds and normalizes aromaticity. Hydrogen counts must already be set.
  static Molecule from_graph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  // Sorted by neighbor atom index.
  std::span<const Neighbor> neighbors(int i) const {
    return { adjacency_.data() + offsets_[i],
             adjacency_.data() + offsets_[i + 1] };
  }

  // Index of the bond joining a and b, -1 when none.
  int bond_between(int a, int b) const;

  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  int heavy_degree(int i) const;
  // implicit + bracket + attached hydrogen atoms
  int total_h(int i) const;

  // Smallest set of smallest rings, each as a cyclic atom sequence.
  const std::vector<std::vector<int>> &rings() const { return rings_; }
  int ring_membership(int i) const { return ring_membership_[i]; }
  bool in_ring(int i) const { return ring_membership_[i] > 0; }
  bool in_ring_of_size(int i, int size) const;

  int num_fragments() const { return num_fragments_; }
  bool multi_fragment() const { return num_fragments_ > 1; }

  friend bool operator==(const Molecule &, const Molecule &) = default;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> offsets_ { 0 };
  std::vector<Neighbor> adjacency_;
  std::vector<std::vector<int>> rings_;
  std::vector<int> ring_membership_;
  int num_fragments_ = 0;
};

class SmilesError: public std::runtime_error {
public:
  enum class Kind {
    kSyntax,
    kUnclosedRing,
    kValence,
    kUnsupported,
  };

  SmilesError(Kind kind, std::size_t position, int detail,
              const std::string &what);

  Kind kind() const { return kind_; }
  // Byte offset into the input; for kValence the offset of the atom.
  std::size_t position() const { return position_; }
  // Ring digit for kUnclosedRing, atom index for kValence, else -1.
  int detail() const { return detail_; }

private:
  Kind kind_;
  std::size_t position_;
  int detail_;
};

// Parses a SMILES string. Stereo markers (/ \ @ @@) and atom classes are
// accepted and discarded. Throws SmilesError.
Molecule parse_smiles(std::string_view text);

// Smallest set of smallest rings by Horton candidate cycles and GF(2)
// elimination; ties broken by size, then by the sorted atom index list.
std::vector<std::vector<int>> perceive_rings(const Molecule &mol);

// Order-independent initial identifier for extended-connectivity
// fingerprints.
std::uint64_t atom_invariant(const Molecule &mol, int i);

// Copy of mol with every implicit and bracket hydrogen turned into an
// explicit hydrogen atom appended after the original atoms.
Molecule add_hydrogens(const Molecule &mol);
}  // namespace solvo

#endif  // SOLVO_MOLECULE_H_
