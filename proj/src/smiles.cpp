//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solvo/elements.h"
#include "solvo/molecule.h"

namespace solvo {
namespace {
using Kind = SmilesError::Kind;

[[noreturn]] void fail(Kind kind, std::size_t pos, const std::string &reason,
                       int detail = -1) {
  throw SmilesError(kind, pos, detail,
                    "SMILES error at position " + std::to_string(pos) + ": "
                        + reason);
}

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

bool is_lower(char c) {
  return c >= 'a' && c <= 'z';
}

bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}

struct PendingBond {
  int a;
  int b;
  std::optional<BondOrder> order;
  std::size_t pos;
};

struct RingOpening {
  int atom;
  std::optional<BondOrder> order;
  std::size_t pos;
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): s_(text) { }

  Molecule parse() {
    if (s_.empty())
      fail(Kind::kSyntax, 0, "empty SMILES");

    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '[' || is_upper(c) || is_lower(c)) {
        add_atom(c == '[' ? bracket_atom() : organic_atom());
      } else if (c == '*') {
        fail(Kind::kUnsupported, pos_, "wildcard atom '*' is not supported");
      } else if (c == '(') {
        if (prev_ < 0 || bond_.has_value())
          fail(Kind::kSyntax, pos_, "branch must follow an atom");
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == ')')
          fail(Kind::kSyntax, pos_, "empty branch");
        branches_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty())
          fail(Kind::kSyntax, pos_, "unmatched ')'");
        if (bond_.has_value() || prev_ < 0)
          fail(Kind::kSyntax, pos_, "branch ends without an atom");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
                 || c == '\\') {
        if (bond_.has_value())
          fail(Kind::kSyntax, pos_, "consecutive bond symbols");
        if (prev_ < 0)
          fail(Kind::kSyntax, pos_, "bond without a preceding atom");
        bond_ = c == '=' ? BondOrder::kDouble
                : c == '#' ? BondOrder::kTriple
                : c == ':' ? BondOrder::kAromatic
                           : BondOrder::kSingle;
        bond_pos_ = pos_;
        ++pos_;
      } else if (c == '$') {
        fail(Kind::kUnsupported, pos_, "quadruple bonds are not supported");
      } else if (is_digit(c) || c == '%') {
        ring_closure();
      } else if (c == '.') {
        if (prev_ < 0 || bond_.has_value())
          fail(Kind::kSyntax, pos_, "'.' must follow an atom");
        prev_ = -1;
        dot_pos_ = pos_;
        ++pos_;
      } else {
        fail(Kind::kSyntax, pos_,
             std::string("unexpected character '")
                 + (std::isprint(static_cast<unsigned char>(c))
                        ? std::string(1, c)
                        : "\\x" + std::to_string(static_cast<unsigned char>(c)))
                 + "'");
      }
    }

    if (bond_.has_value())
      fail(Kind::kSyntax, bond_pos_, "dangling bond at end of input");
    if (!branches_.empty())
      fail(Kind::kSyntax, s_.size(), "unclosed branch");
    if (!rings_.empty()) {
      const auto &[digit, open] = *rings_.begin();
      fail(Kind::kUnclosedRing, open.pos,
           "ring closure " + std::to_string(digit) + " never closed", digit);
    }
    if (prev_ < 0)
      fail(Kind::kSyntax, dot_pos_, "input ends with '.'");

    assign_hydrogens();

    std::vector<Bond> bonds;
    bonds.reserve(pending_.size());
    for (const PendingBond &pb: pending_) {
      Bond bd;
      bd.a = pb.a;
      bd.b = pb.b;
      bool both_aromatic = atoms_[pb.a].is_aromatic && atoms_[pb.b].is_aromatic;
      bd.order = pb.order.value_or(both_aromatic ? BondOrder::kAromatic
                                                 : BondOrder::kSingle);
      if (bd.order == BondOrder::kAromatic && !both_aromatic)
        fail(Kind::kSyntax, pb.pos,
             "aromatic bond between non-aromatic atoms");
      bonds.push_back(bd);
    }

    Molecule mol = Molecule::from_graph(atoms_, std::move(bonds));
    for (const Atom &atom: mol.atoms()) {
      if (atom.is_aromatic && !mol.in_ring(atom.index))
        fail(Kind::kSyntax, atom_pos_[atom.index],
             "aromatic atom outside a ring");
    }
    return mol;
  }

private:
  void add_atom(Atom atom) {
    int idx = static_cast<int>(atoms_.size());
    atom.index = idx;
    atoms_.push_back(atom);
    atom_pos_.push_back(atom_start_);
    if (prev_ >= 0) {
      add_bond(prev_, idx, bond_, bond_.has_value() ? bond_pos_ : atom_start_);
    } else if (bond_.has_value()) {
      fail(Kind::kSyntax, bond_pos_, "bond without a preceding atom");
    }
    bond_.reset();
    prev_ = idx;
  }

  void add_bond(int a, int b, std::optional<BondOrder> order,
                std::size_t pos) {
    if (a == b)
      fail(Kind::kSyntax, pos, "ring closure bonds an atom to itself");
    for (const PendingBond &pb: pending_) {
      if ((pb.a == a && pb.b == b) || (pb.a == b && pb.b == a))
        fail(Kind::kSyntax, pos, "duplicate bond between two atoms");
    }
    pending_.push_back({ a, b, order, pos });
  }

  Atom organic_atom() {
    atom_start_ = pos_;
    Atom atom;
    char c = s_[pos_];
    char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
    int z = 0;
    if (c == 'C' && next == 'l') {
      z = 17;
      pos_ += 2;
    } else if (c == 'B' && next == 'r') {
      z = 35;
      pos_ += 2;
    } else {
      switch (c) {
      case 'B':
        z = 5;
        break;
      case 'C':
        z = 6;
        break;
      case 'N':
        z = 7;
        break;
      case 'O':
        z = 8;
        break;
      case 'P':
        z = 15;
        break;
      case 'S':
        z = 16;
        break;
      case 'F':
        z = 9;
        break;
      case 'I':
        z = 53;
        break;
      case 'b':
        z = 5;
        break;
      case 'c':
        z = 6;
        break;
      case 'n':
        z = 7;
        break;
      case 'o':
        z = 8;
        break;
      case 'p':
        z = 15;
        break;
      case 's':
        z = 16;
        break;
      default:
        if (is_upper(c) && atomic_number_of(std::string(1, c)) > 0)
          fail(Kind::kSyntax, pos_,
               std::string("element '") + c
                   + "' is outside the organic subset and needs brackets");
        fail(Kind::kSyntax, pos_,
             std::string("unexpected character '") + c + "'");
      }
      atom.is_aromatic = is_lower(c);
      ++pos_;
    }
    atom.atomic_number = z;
    return atom;
  }

  int read_number(std::size_t max_digits) {
    int value = 0;
    std::size_t n = 0;
    while (pos_ < s_.size() && is_digit(s_[pos_]) && n < max_digits) {
      value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++n;
    }
    if (pos_ < s_.size() && is_digit(s_[pos_]))
      fail(Kind::kSyntax, pos_, "number too large");
    return value;
  }

  Atom bracket_atom() {
    atom_start_ = pos_;
    Atom atom;
    atom.bracket = true;
    ++pos_;  // '['
    auto at_end = [&] { return pos_ >= s_.size(); };
    auto need = [&] {
      if (at_end())
        fail(Kind::kSyntax, atom_start_, "unterminated bracket atom");
    };

    need();
    if (is_digit(s_[pos_])) {
      atom.isotope = read_number(3);
      if (atom.isotope == 0)
        fail(Kind::kSyntax, pos_, "isotope mass number must be positive");
    }

    need();
    char c = s_[pos_];
    if (c == '*')
      fail(Kind::kUnsupported, pos_, "wildcard atom '*' is not supported");
    if (is_upper(c)) {
      int z = 0;
      if (pos_ + 1 < s_.size() && is_lower(s_[pos_ + 1]))
        z = atomic_number_of(s_.substr(pos_, 2));
      if (z > 0) {
        pos_ += 2;
      } else {
        z = atomic_number_of(s_.substr(pos_, 1));
        if (z == 0)
          fail(Kind::kSyntax, pos_, "unknown element symbol");
        pos_ += 1;
      }
      atom.atomic_number = z;
    } else if (is_lower(c)) {
      static const std::pair<std::string_view, int> kAromatic[] = {
        { "se", 34 }, { "as", 33 }, { "te", 52 }, { "b", 5 }, { "c", 6 },
        { "n", 7 },   { "o", 8 },   { "p", 15 },  { "s", 16 },
      };
      int z = 0;
      for (const auto &[sym, num]: kAromatic) {
        if (s_.substr(pos_, sym.size()) == sym) {
          z = num;
          pos_ += sym.size();
          break;
        }
      }
      if (z == 0)
        fail(Kind::kSyntax, pos_, "unknown aromatic element symbol");
      atom.atomic_number = z;
      atom.is_aromatic = true;
    } else {
      fail(Kind::kSyntax, pos_, "expected an element symbol");
    }

    // chirality: accepted and ignored
    need();
    if (s_[pos_] == '@') {
      ++pos_;
      need();
      if (s_[pos_] == '@') {
        ++pos_;
      } else if (is_upper(s_[pos_])) {
        while (!at_end() && is_upper(s_[pos_]))
          ++pos_;
        while (!at_end() && is_digit(s_[pos_]))
          ++pos_;
      }
    }

    need();
    if (s_[pos_] == 'H') {
      ++pos_;
      need();
      atom.explicit_h = is_digit(s_[pos_]) ? read_number(1) : 1;
    }

    need();
    if (s_[pos_] == '+' || s_[pos_] == '-') {
      char sign = s_[pos_];
      int mag = 1;
      ++pos_;
      need();
      if (is_digit(s_[pos_])) {
        mag = read_number(2);
        if (mag > 15)
          fail(Kind::kSyntax, pos_, "charge magnitude too large");
      } else {
        while (!at_end() && s_[pos_] == sign && mag < 15) {
          ++mag;
          ++pos_;
        }
      }
      atom.formal_charge = sign == '+' ? mag : -mag;
    }

    need();
    if (s_[pos_] == ':') {
      ++pos_;
      need();
      if (!is_digit(s_[pos_]))
        fail(Kind::kSyntax, pos_, "atom class needs digits");
      read_number(9);
    }

    need();
    if (s_[pos_] != ']')
      fail(Kind::kSyntax, pos_, "malformed bracket atom");
    ++pos_;
    return atom;
  }

  void ring_closure() {
    std::size_t start = pos_;
    int digit;
    if (s_[pos_] == '%') {
      ++pos_;
      if (pos_ + 1 >= s_.size() || !is_digit(s_[pos_])
          || !is_digit(s_[pos_ + 1]))
        fail(Kind::kSyntax, start, "'%' needs two digits");
      digit = (s_[pos_] - '0') * 10 + (s_[pos_ + 1] - '0');
      pos_ += 2;
    } else {
      digit = s_[pos_] - '0';
      ++pos_;
    }
    if (prev_ < 0)
      fail(Kind::kSyntax, start, "ring closure without a preceding atom");

    auto it = rings_.find(digit);
    if (it == rings_.end()) {
      rings_[digit] = { prev_, bond_, start };
    } else {
      const RingOpening open = it->second;
      rings_.erase(it);
      std::optional<BondOrder> order = open.order;
      if (bond_.has_value()) {
        if (order.has_value() && *order != *bond_)
          fail(Kind::kSyntax, start, "conflicting ring closure bond orders");
        order = bond_;
      }
      add_bond(open.atom, prev_, order, start);
    }
    bond_.reset();
  }

  // Organic-subset atoms take the lowest standard valence that fits their
  // bonds. Aromatic B/C/N/P reserve one extra unit for the pi bond; O and
  // S in aromatic rings donate a lone pair instead.
  void assign_hydrogens() {
    std::vector<int> sum(atoms_.size(), 0);
    for (const PendingBond &pb: pending_) {
      bool both_aromatic = atoms_[pb.a].is_aromatic && atoms_[pb.b].is_aromatic;
      BondOrder order = pb.order.value_or(both_aromatic ? BondOrder::kAromatic
                                                        : BondOrder::kSingle);
      sum[pb.a] += bond_valence(order);
      sum[pb.b] += bond_valence(order);
    }

    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Atom &atom = atoms_[i];
      auto valences = standard_valences(atom.atomic_number);
      if (atom.bracket) {
        atom.implicit_h = 0;
        if (!valences.empty()) {
          int limit = valences.back() + std::abs(atom.formal_charge);
          if (sum[i] + atom.explicit_h > limit)
            fail(Kind::kValence, atom_pos_[i],
                 "atom " + std::to_string(i) + " exceeds its maximum valence",
                 static_cast<int>(i));
        }
        continue;
      }

      int target = sum[i];
      int z = atom.atomic_number;
      if (atom.is_aromatic && (z == 5 || z == 6 || z == 7 || z == 15)
          && target + 1 <= valences.back())
        target += 1;
      int chosen = -1;
      for (int v: valences) {
        if (v >= target) {
          chosen = v;
          break;
        }
      }
      if (chosen < 0)
        fail(Kind::kValence, atom_pos_[i],
             "atom " + std::to_string(i) + " exceeds its maximum valence",
             static_cast<int>(i));
      atom.implicit_h = chosen - target;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t atom_start_ = 0;
  std::size_t bond_pos_ = 0;
  std::size_t dot_pos_ = 0;
  int prev_ = -1;
  std::optional<BondOrder> bond_;
  std::vector<int> branches_;
  std::map<int, RingOpening> rings_;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> atom_pos_;
  std::vector<PendingBond> pending_;
};
}  // namespace

Molecule parse_smiles(std::string_view text) {
  return SmilesParser(text).parse();
}
}  // namespace solvo
