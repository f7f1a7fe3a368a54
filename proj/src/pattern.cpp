//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <optional>
#include <string>

#include "solvo/elements.h"
#include "solvo/pattern.h"

namespace solvo {
namespace {
bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

bool is_lower(char c) {
  return c >= 'a' && c <= 'z';
}

bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}

bool is_bond_char(char c) {
  switch (c) {
  case '-':
  case '=':
  case '#':
  case ':':
  case '~':
  case '@':
  case '!':
  case '&':
  case ',':
  case ';':
  case '/':
  case '\\':
    return true;
  default:
    return false;
  }
}

AtomExpr leaf(AtomPrimitive::Kind kind, int value = 0, bool aromatic = false) {
  AtomExpr e;
  e.primitive = { kind, value, aromatic };
  return e;
}

template <typename Expr>
Expr combine(typename Expr::Op op, std::vector<Expr> parts) {
  if (parts.size() == 1)
    return std::move(parts.front());
  Expr e;
  e.op = op;
  e.children = std::move(parts);
  return e;
}

int smallest_ring_size(const Molecule &mol, int atom) {
  int best = 0;
  for (const auto &ring: mol.rings()) {
    int size = static_cast<int>(ring.size());
    if ((best == 0 || size < best)
        && std::find(ring.begin(), ring.end(), atom) != ring.end())
      best = size;
  }
  return best;
}

struct RingOpening {
  int atom;
  std::optional<BondExpr> expr;
};

class PatternParser {
public:
  explicit PatternParser(std::string_view text): s_(text) { }

  void parse(std::vector<AtomExpr> &atoms, std::vector<QueryBond> &bonds) {
    atoms_ = &atoms;
    bonds_ = &bonds;
    if (s_.empty())
      syntax(0, "empty pattern");

    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '[') {
        add_atom(bracket_atom());
      } else if (is_upper(c) || is_lower(c) || c == '*') {
        add_atom(organic_atom());
      } else if (c == '(') {
        if (prev_ < 0 || bond_.has_value())
          syntax(pos_, "branch must follow an atom");
        branches_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty())
          syntax(pos_, "unmatched ')'");
        if (bond_.has_value())
          syntax(pos_, "branch ends with a bond");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (is_digit(c) || c == '%') {
        ring_closure();
      } else if (is_bond_char(c)) {
        if (prev_ < 0 || bond_.has_value())
          syntax(pos_, "bond must follow an atom");
        bond_ = bond_expression();
      } else if (c == '.') {
        throw UnsupportedPrimitive(pos_, ".");
      } else if (c == '$') {
        throw UnsupportedPrimitive(pos_, "$(");
      } else {
        syntax(pos_, std::string("unexpected character '") + c + "'");
      }
    }

    if (bond_.has_value())
      syntax(s_.size(), "pattern ends with a bond");
    if (!branches_.empty())
      syntax(s_.size(), "unclosed branch");
    if (!rings_.empty())
      syntax(s_.size(),
             "unclosed ring closure " + std::to_string(rings_.front().first));
    if (atoms.empty())
      syntax(0, "pattern has no atoms");
  }

private:
  [[noreturn]] static void syntax(std::size_t pos, const std::string &reason) {
    throw PatternSyntaxError(pos, "pattern syntax error at position "
                                      + std::to_string(pos) + ": " + reason);
  }

  void add_atom(AtomExpr expr) {
    int idx = static_cast<int>(atoms_->size());
    atoms_->push_back(std::move(expr));
    if (prev_ >= 0) {
      BondExpr b = bond_.value_or(BondExpr {});
      bonds_->push_back({ prev_, idx, std::move(b) });
    } else if (idx > 0) {
      syntax(pos_, "disconnected atom");
    }
    bond_.reset();
    prev_ = idx;
  }

  AtomExpr organic_atom() {
    char c = s_[pos_];
    if (c == '*') {
      ++pos_;
      return leaf(AtomPrimitive::Kind::kAny);
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      return leaf(c == 'a' ? AtomPrimitive::Kind::kAromatic
                           : AtomPrimitive::Kind::kAliphatic);
    }
    if (s_.substr(pos_, 2) == "Cl" || s_.substr(pos_, 2) == "Br") {
      int z = atomic_number_of(s_.substr(pos_, 2));
      pos_ += 2;
      return leaf(AtomPrimitive::Kind::kElement, z, false);
    }
    static constexpr std::string_view kAliphatic = "BCNOPSFI";
    static constexpr std::string_view kAromatic = "bcnops";
    if (kAliphatic.find(c) != std::string_view::npos) {
      ++pos_;
      return leaf(AtomPrimitive::Kind::kElement,
                  atomic_number_of(std::string(1, c)), false);
    }
    if (kAromatic.find(c) != std::string_view::npos) {
      ++pos_;
      char upper = static_cast<char>(c - 'a' + 'A');
      return leaf(AtomPrimitive::Kind::kElement,
                  atomic_number_of(std::string(1, upper)), true);
    }
    syntax(pos_, std::string("'") + c + "' is not an unbracketed atom");
  }

  AtomExpr bracket_atom() {
    ++pos_;  // '['
    bracket_start_ = pos_;
    if (pos_ < s_.size() && is_digit(s_[pos_]))
      throw UnsupportedPrimitive(pos_, "isotope");
    AtomExpr e = low_and();
    if (pos_ >= s_.size() || s_[pos_] != ']')
      syntax(pos_, "expected ']'");
    ++pos_;
    return e;
  }

  AtomExpr low_and() {
    std::vector<AtomExpr> parts { or_expr() };
    while (peek() == ';') {
      ++pos_;
      parts.push_back(or_expr());
    }
    return combine(AtomExpr::Op::kAnd, std::move(parts));
  }

  AtomExpr or_expr() {
    std::vector<AtomExpr> parts { high_and() };
    while (peek() == ',') {
      ++pos_;
      parts.push_back(high_and());
    }
    return combine(AtomExpr::Op::kOr, std::move(parts));
  }

  AtomExpr high_and() {
    std::vector<AtomExpr> parts { not_expr() };
    for (;;) {
      char c = peek();
      if (c == '&') {
        ++pos_;
      } else if (c == ';' || c == ',' || c == ']' || c == '\0') {
        break;
      }
      parts.push_back(not_expr());
    }
    return combine(AtomExpr::Op::kAnd, std::move(parts));
  }

  AtomExpr not_expr() {
    if (peek() == '!') {
      ++pos_;
      AtomExpr e;
      e.op = AtomExpr::Op::kNot;
      e.children.push_back(not_expr());
      return e;
    }
    return atom_primitive();
  }

  std::optional<int> number() {
    if (pos_ >= s_.size() || !is_digit(s_[pos_]))
      return std::nullopt;
    int v = 0;
    while (pos_ < s_.size() && is_digit(s_[pos_])) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 999)
        syntax(pos_, "number too large");
      ++pos_;
    }
    return v;
  }

  AtomExpr atom_primitive() {
    using K = AtomPrimitive::Kind;
    if (pos_ >= s_.size())
      syntax(pos_, "unterminated bracket atom");
    const std::size_t start = pos_;
    char c = s_[pos_];

    switch (c) {
    case '*':
      ++pos_;
      return leaf(K::kAny);
    case '#': {
      ++pos_;
      auto z = number();
      if (!z || *z < 1 || *z > kMaxAtomicNumber)
        syntax(start, "expected an atomic number after '#'");
      return leaf(K::kAtomicNumber, *z);
    }
    case '+':
    case '-': {
      int sign = c == '+' ? 1 : -1;
      ++pos_;
      if (auto n = number())
        return leaf(K::kCharge, sign * *n);
      int magnitude = 1;
      while (peek() == c) {
        ++magnitude;
        ++pos_;
      }
      return leaf(K::kCharge, sign * magnitude);
    }
    case '$':
      throw UnsupportedPrimitive(pos_, "$(");
    case '@':
      throw UnsupportedPrimitive(pos_, "@");
    case ':':
      throw UnsupportedPrimitive(pos_, ":<atom map>");
    default:
      break;
    }

    if (is_upper(c)) {
      if (pos_ + 1 < s_.size() && is_lower(s_[pos_ + 1])) {
        int z = atomic_number_of(s_.substr(pos_, 2));
        if (z > 0) {
          pos_ += 2;
          return leaf(K::kElement, z, false);
        }
      }
      ++pos_;
      switch (c) {
      case 'A':
        return leaf(K::kAliphatic);
      case 'H': {
        // "[H]", "[H+]": the element; anywhere else a hydrogen count
        char next = peek();
        if (start == bracket_start_
            && (next == ']' || next == '+' || next == '-'))
          return leaf(K::kElement, 1, false);
        return leaf(K::kTotalH, number().value_or(1));
      }
      case 'D':
        return leaf(K::kHeavyDegree, number().value_or(1));
      case 'X':
        return leaf(K::kConnectivity, number().value_or(1));
      case 'R': {
        auto n = number();
        if (!n)
          return leaf(K::kInRing);
        if (*n == 0) {
          AtomExpr e;
          e.op = AtomExpr::Op::kNot;
          e.children.push_back(leaf(K::kInRing));
          return e;
        }
        return leaf(K::kRingCount, *n);
      }
      case 'Q':
      case 'Z':
        throw UnsupportedPrimitive(start, std::string(1, c));
      default:
        break;
      }
      int z = atomic_number_of(s_.substr(start, 1));
      if (z == 0)
        syntax(start, std::string("unknown element '") + c + "'");
      return leaf(K::kElement, z, false);
    }

    if (is_lower(c)) {
      if (pos_ + 1 < s_.size() && is_lower(s_[pos_ + 1])) {
        std::string_view two = s_.substr(pos_, 2);
        if (two == "se" || two == "as" || two == "te") {
          std::string sym { static_cast<char>(two[0] - 'a' + 'A'), two[1] };
          pos_ += 2;
          return leaf(K::kElement, atomic_number_of(sym), true);
        }
      }
      ++pos_;
      switch (c) {
      case 'a':
        return leaf(K::kAromatic);
      case 'b':
      case 'c':
      case 'n':
      case 'o':
      case 'p':
      case 's': {
        std::string sym(1, static_cast<char>(c - 'a' + 'A'));
        return leaf(K::kElement, atomic_number_of(sym), true);
      }
      case 'r': {
        auto n = number();
        if (!n)
          return leaf(K::kInRing);
        if (*n < 3)
          syntax(start, "ring size must be at least 3");
        return leaf(K::kRingSize, *n);
      }
      case 'v':
      case 'x':
      case 'h':
      case 'z':
        throw UnsupportedPrimitive(start, std::string(1, c));
      default:
        syntax(start, std::string("unknown primitive '") + c + "'");
      }
    }
    if (c == '^')
      throw UnsupportedPrimitive(start, "^");
    syntax(start, std::string("unexpected character '") + c + "'");
  }

  BondExpr bond_expression() {
    std::size_t end = pos_;
    while (end < s_.size() && is_bond_char(s_[end]))
      ++end;
    bond_end_ = end;
    BondExpr e = bond_low_and();
    if (pos_ != end)
      syntax(pos_, "malformed bond expression");
    return e;
  }

  char bond_peek() const { return pos_ < bond_end_ ? s_[pos_] : '\0'; }

  BondExpr bond_low_and() {
    std::vector<BondExpr> parts { bond_or() };
    while (bond_peek() == ';') {
      ++pos_;
      parts.push_back(bond_or());
    }
    return combine(BondExpr::Op::kAnd, std::move(parts));
  }

  BondExpr bond_or() {
    std::vector<BondExpr> parts { bond_high_and() };
    while (bond_peek() == ',') {
      ++pos_;
      parts.push_back(bond_high_and());
    }
    return combine(BondExpr::Op::kOr, std::move(parts));
  }

  BondExpr bond_high_and() {
    std::vector<BondExpr> parts { bond_not() };
    for (;;) {
      char c = bond_peek();
      if (c == '&')
        ++pos_;
      else if (c == ';' || c == ',' || c == '\0')
        break;
      parts.push_back(bond_not());
    }
    return combine(BondExpr::Op::kAnd, std::move(parts));
  }

  BondExpr bond_not() {
    if (bond_peek() == '!') {
      ++pos_;
      BondExpr e;
      e.op = BondExpr::Op::kNot;
      e.children.push_back(bond_not());
      return e;
    }
    using P = BondExpr::Primitive;
    BondExpr e;
    switch (bond_peek()) {
    case '-':
      e.primitive = P::kSingle;
      break;
    case '=':
      e.primitive = P::kDouble;
      break;
    case '#':
      e.primitive = P::kTriple;
      break;
    case ':':
      e.primitive = P::kAromatic;
      break;
    case '~':
      e.primitive = P::kAny;
      break;
    case '@':
      e.primitive = P::kRing;
      break;
    case '/':
    case '\\':
      throw UnsupportedPrimitive(pos_, std::string(1, s_[pos_]));
    default:
      syntax(pos_, "expected a bond primitive");
    }
    ++pos_;
    return e;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    if (prev_ < 0)
      syntax(pos_, "ring closure must follow an atom");
    int digit;
    if (s_[pos_] == '%') {
      if (pos_ + 2 >= s_.size() || !is_digit(s_[pos_ + 1])
          || !is_digit(s_[pos_ + 2]))
        syntax(pos_, "expected two digits after '%'");
      digit = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      digit = s_[pos_] - '0';
      ++pos_;
    }

    auto it = std::find_if(rings_.begin(), rings_.end(),
                           [&](const auto &r) { return r.first == digit; });
    if (it == rings_.end()) {
      rings_.emplace_back(digit, RingOpening { prev_, bond_ });
      bond_.reset();
      return;
    }
    RingOpening open = it->second;
    rings_.erase(it);
    if (open.atom == prev_)
      syntax(start, "ring closure joins an atom to itself");
    for (const QueryBond &qb: *bonds_) {
      if ((qb.a == open.atom && qb.b == prev_)
          || (qb.a == prev_ && qb.b == open.atom))
        syntax(start, "ring closure duplicates a bond");
    }
    BondExpr expr = bond_.has_value() ? *bond_ : open.expr.value_or(BondExpr {});
    bonds_->push_back({ open.atom, prev_, std::move(expr) });
    bond_.reset();
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t bracket_start_ = 0;
  std::size_t bond_end_ = 0;
  int prev_ = -1;
  std::optional<BondExpr> bond_;
  std::vector<int> branches_;
  std::vector<std::pair<int, RingOpening>> rings_;
  std::vector<AtomExpr> *atoms_ = nullptr;
  std::vector<QueryBond> *bonds_ = nullptr;
};
}  // namespace

bool AtomPrimitive::matches(const Molecule &mol, int i) const {
  const Atom &atom = mol.atom(i);
  switch (kind) {
  case Kind::kAny:
    return true;
  case Kind::kAromatic:
    return atom.is_aromatic;
  case Kind::kAliphatic:
    return !atom.is_aromatic;
  case Kind::kElement:
    return atom.atomic_number == value && atom.is_aromatic == aromatic;
  case Kind::kAtomicNumber:
    return atom.atomic_number == value;
  case Kind::kHeavyDegree:
    return mol.heavy_degree(i) == value;
  case Kind::kConnectivity:
    return mol.degree(i) + atom.implicit_h + atom.explicit_h == value;
  case Kind::kTotalH:
    return mol.total_h(i) == value;
  case Kind::kInRing:
    return mol.in_ring(i);
  case Kind::kRingCount:
    return mol.ring_membership(i) == value;
  case Kind::kRingSize:
    return smallest_ring_size(mol, i) == value;
  case Kind::kCharge:
    return atom.formal_charge == value;
  }
  return false;
}

bool AtomExpr::matches(const Molecule &mol, int atom) const {
  switch (op) {
  case Op::kPrimitive:
    return primitive.matches(mol, atom);
  case Op::kNot:
    return !children.front().matches(mol, atom);
  case Op::kAnd:
    return std::all_of(children.begin(), children.end(),
                       [&](const AtomExpr &c) { return c.matches(mol, atom); });
  case Op::kOr:
    return std::any_of(children.begin(), children.end(),
                       [&](const AtomExpr &c) { return c.matches(mol, atom); });
  }
  return false;
}

bool BondExpr::matches(const Bond &bond) const {
  switch (op) {
  case Op::kPrimitive:
    switch (primitive) {
    case Primitive::kDefault:
      return bond.order == BondOrder::kSingle
          || bond.order == BondOrder::kAromatic;
    case Primitive::kSingle:
      return bond.order == BondOrder::kSingle;
    case Primitive::kDouble:
      return bond.order == BondOrder::kDouble;
    case Primitive::kTriple:
      return bond.order == BondOrder::kTriple;
    case Primitive::kAromatic:
      return bond.order == BondOrder::kAromatic;
    case Primitive::kAny:
      return true;
    case Primitive::kRing:
      return bond.in_ring;
    }
    return false;
  case Op::kNot:
    return !children.front().matches(bond);
  case Op::kAnd:
    return std::all_of(children.begin(), children.end(),
                       [&](const BondExpr &c) { return c.matches(bond); });
  case Op::kOr:
    return std::any_of(children.begin(), children.end(),
                       [&](const BondExpr &c) { return c.matches(bond); });
  }
  return false;
}

int Pattern::bond_between(int a, int b) const {
  for (std::size_t k = 0; k < bonds_.size(); ++k) {
    const QueryBond &qb = bonds_[k];
    if ((qb.a == a && qb.b == b) || (qb.a == b && qb.b == a))
      return static_cast<int>(k);
  }
  return -1;
}

Pattern parse_pattern(std::string_view text) {
  Pattern p;
  p.source_ = std::string(text);
  PatternParser(text).parse(p.atoms_, p.bonds_);
  return p;
}
}  // namespace solvo
