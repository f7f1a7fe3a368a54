//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_PATTERN_H_
#define SOLVO_PATTERN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solvo/molecule.h"

namespace solvo {
// Pattern grammar: a SMARTS subset.
//
//   atoms     organic-subset symbols (C, c, Cl, ...), '*', 'a', 'A', or a
//             bracket expression
//   bracket   primitives  #n  element  D<n>  X<n>  H<n>  R  R<n>  r<n>
//             + +n ++ - -n --  *  a  A
//             operators   !  (not)  &  (high and, also juxtaposition)
//                         ,  (or)   ;  (low and)
//   bonds     - = # : ~ @ with ! & , ; ; no bond symbol means single or
//             aromatic
//   structure branches '(' ')', ring closures 0-9 and %nn
//
// D is the heavy-atom degree, X the total connection count including
// hydrogens, H the total hydrogen count. R without a number means "in any
// ring", R<n> "in exactly n SSSR rings", r<n> "smallest SSSR ring containing
// the atom has size n".
// Recursive SMARTS, component grouping, stereo, isotopes and '.' are
// rejected with UnsupportedPrimitive.
struct AtomPrimitive {
  enum class Kind : std::uint8_t {
    kAny,
    kAromatic,
    kAliphatic,
    kElement,  // value = atomic number, aromatic = required flag
    kAtomicNumber,
    kHeavyDegree,
    kConnectivity,
    kTotalH,
    kInRing,
    kRingCount,
    kRingSize,
    kCharge,
  };

  Kind kind = Kind::kAny;
  int value = 0;
  bool aromatic = false;

  bool matches(const Molecule &mol, int atom) const;
};

struct AtomExpr {
  enum class Op : std::uint8_t { kPrimitive, kNot, kAnd, kOr };

  Op op = Op::kPrimitive;
  AtomPrimitive primitive;
  std::vector<AtomExpr> children;

  bool matches(const Molecule &mol, int atom) const;
};

struct BondExpr {
  enum class Op : std::uint8_t { kPrimitive, kNot, kAnd, kOr };
  enum class Primitive : std::uint8_t {
    kDefault,  // single or aromatic
    kSingle,
    kDouble,
    kTriple,
    kAromatic,
    kAny,
    kRing,
  };

  Op op = Op::kPrimitive;
  Primitive primitive = Primitive::kDefault;
  std::vector<BondExpr> children;

  bool matches(const Bond &bond) const;
};

struct QueryBond {
  int a;
  int b;
  BondExpr expr;
};

class Pattern {
public:
  const std::string &source() const { return source_; }
  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  const AtomExpr &atom(int i) const { return atoms_[i]; }
  const QueryBond &bond(int i) const { return bonds_[i]; }
  std::span<const QueryBond> bonds() const { return bonds_; }
  // Query bond index joining query atoms a and b, -1 when none.
  int bond_between(int a, int b) const;

private:
  friend Pattern parse_pattern(std::string_view text);

  std::string source_;
  std::vector<AtomExpr> atoms_;
  std::vector<QueryBond> bonds_;
};

class PatternError: public std::runtime_error {
public:
  PatternError(std::size_t position, const std::string &what)
      : std::runtime_error(what), position_(position) { }

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class PatternSyntaxError: public PatternError {
public:
  using PatternError::PatternError;
};

// A valid SMARTS construct outside the supported subset.
class UnsupportedPrimitive: public PatternError {
public:
  UnsupportedPrimitive(std::size_t position, std::string token)
      : PatternError(position, "unsupported pattern primitive '" + token + "'"),
        token_(std::move(token)) { }

  const std::string &token() const { return token_; }

private:
  std::string token_;
};

// Throws PatternSyntaxError or UnsupportedPrimitive.
Pattern parse_pattern(std::string_view text);

class SearchBudgetExceeded: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MatchOptions {
  // Upper bound on candidate extensions examined by the backtracking
  // search before SearchBudgetExceeded is thrown.
  std::size_t budget = 1'000'000;
  // Stop after this many embeddings.
  std::size_t max_matches = std::numeric_limits<std::size_t>::max();
  // When >= 0, query atom 0 may only map to this molecule atom.
  int root_atom = -1;
};

struct MatchSet {
  // mappings[k][q] = molecule atom matched by query atom q
  std::vector<std::vector<int>> mappings;
  std::size_t match_count = 0;
  bool any_match = false;

  // Embeddings covering the same molecule atoms counted once.
  std::size_t unique_atom_sets() const;
};

// Enumerates injective embeddings by backtracking. Root candidates and
// extensions are visited in ascending molecule atom index, so the order of
// mappings is deterministic. Throws SearchBudgetExceeded.
MatchSet match(const Pattern &pattern, const Molecule &mol,
               const MatchOptions &options = {});

// Streams embeddings to visit; stops early when visit returns false.
void for_each_match(const Pattern &pattern, const Molecule &mol,
                    const std::function<bool(std::span<const int>)> &visit,
                    const MatchOptions &options = {});

bool has_match(const Pattern &pattern, const Molecule &mol,
               const MatchOptions &options = {});

// True when some embedding maps query atom 0 onto the given atom.
bool matches_at(const Pattern &pattern, const Molecule &mol, int atom,
                std::size_t budget = MatchOptions {}.budget);
}  // namespace solvo

#endif  // SOLVO_PATTERN_H_
