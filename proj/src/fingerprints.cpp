//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/fingerprints.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <set>

#include <spdlog/spdlog.h>

#include "solvo/data_files.h"
#include "solvo/hash.h"

namespace solvo {
namespace {
using AtomSet = std::vector<std::uint64_t>;

std::uint32_t bond_code(BondOrder order) {
  return static_cast<std::uint32_t>(order);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, int line, const char *what) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc {} || ptr != s.data() + s.size())
    throw KeyFileError(line, std::string("bad ") + what + " '"
                                 + std::string(s) + "'");
  return v;
}

bool is_builtin(std::string_view name) {
  return name == kBuiltinIsotopes || name == kBuiltinAromaticRings
      || name == kBuiltinFragments;
}

std::size_t aromatic_ring_count(const Molecule &mol) {
  std::size_t n = 0;
  for (const auto &ring: mol.rings()) {
    bool aromatic = true;
    for (std::size_t k = 0; k < ring.size() && aromatic; ++k) {
      int b = mol.bond_between(ring[k], ring[(k + 1) % ring.size()]);
      aromatic = mol.bond(b).order == BondOrder::kAromatic;
    }
    n += aromatic;
  }
  return n;
}
}  // namespace

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (auto w: words_)
    n += std::popcount(w);
  return n;
}

std::vector<std::size_t> BitVector::set_bits() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < length_; ++i) {
    if (test(i))
      out.push_back(i);
  }
  return out;
}

std::vector<MorganEnvironment> morgan_environments(const Molecule &mol,
                                                   int radius) {
  const int n = static_cast<int>(mol.num_atoms());
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> ids(n);
  std::vector<AtomSet> cover(n, AtomSet(words, 0));
  std::set<AtomSet> seen;
  std::vector<MorganEnvironment> out;

  for (int i = 0; i < n; ++i) {
    ids[i] = atom_invariant(mol, i);
    cover[i][i / 64] |= std::uint64_t { 1 } << (i % 64);
    seen.insert(cover[i]);
    out.push_back({ ids[i], 0, i });
  }

  std::vector<std::pair<std::uint32_t, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    std::vector<AtomSet> next_cover = cover;
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor &nb: mol.neighbors(i)) {
        env.emplace_back(bond_code(mol.bond(nb.bond).order), ids[nb.atom]);
        for (std::size_t w = 0; w < words; ++w)
          next_cover[i][w] |= cover[nb.atom][w];
      }
      std::sort(env.begin(), env.end());
      Fnv1a h;
      h.add_u32(static_cast<std::uint32_t>(r));
      h.add_u64(ids[i]);
      h.add_u32(static_cast<std::uint32_t>(env.size()));
      for (auto [code, id]: env) {
        h.add_u32(code);
        h.add_u64(id);
      }
      next[i] = h.digest();
    }

    // Environments that reproduce an atom set from an earlier radius are
    // dropped; among equal sets within this radius the smallest id stays.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
      order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return next[a] != next[b] ? next[a] < next[b] : a < b;
    });
    std::set<AtomSet> fresh;
    std::vector<char> keep(n, 0);
    for (int i: order) {
      if (seen.contains(next_cover[i]) || !fresh.insert(next_cover[i]).second)
        continue;
      keep[i] = 1;
    }
    for (int i = 0; i < n; ++i) {
      if (keep[i])
        out.push_back({ next[i], r, i });
    }
    seen.insert(fresh.begin(), fresh.end());
    ids = std::move(next);
    cover = std::move(next_cover);
  }
  return out;
}

BitVector morgan_fingerprint(const Molecule &mol, int radius,
                             std::size_t nbits) {
  if (radius < 0)
    throw std::invalid_argument("radius must be non-negative");
  if (nbits == 0 || !std::has_single_bit(nbits))
    throw std::invalid_argument("fingerprint length must be a power of two");
  BitVector fp(nbits);
  for (const MorganEnvironment &env: morgan_environments(mol, radius))
    fp.set(env.id % nbits);
  return fp;
}

std::vector<KeyDefinition> parse_key_file(std::string_view text) {
  std::vector<KeyDefinition> keys(kNumStructuralKeys);
  std::vector<char> seen(kNumStructuralKeys, 0);
  std::size_t count = 0;
  int line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#')
      continue;

    std::vector<std::string_view> f;
    for (std::size_t start = 0;;) {
      std::size_t tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos)
        break;
      start = tab + 1;
    }
    if (f.size() < 3)
      throw KeyFileError(line_no, "expected index, min_count and pattern");

    KeyDefinition key;
    key.index = parse_int(f[0], line_no, "key index");
    key.min_count = parse_int(f[1], line_no, "min_count");
    key.pattern_text = std::string(trim(f[2]));
    if (f.size() > 3)
      key.comment = std::string(trim(f[3]));
    if (key.index < 0 || key.index >= static_cast<int>(kNumStructuralKeys))
      throw KeyFileError(line_no, "key index out of range");
    if (seen[key.index])
      throw KeyFileError(line_no,
                         "duplicate key index " + std::to_string(key.index));
    if (key.min_count < 1)
      throw KeyFileError(line_no, "min_count must be at least 1");

    if (key.pattern_text == "RESERVED") {
      if (key.index != 0)
        throw KeyFileError(line_no, "only key 0 may be RESERVED");
      key.kind = KeyDefinition::Kind::kReserved;
    } else if (key.index == 0) {
      throw KeyFileError(line_no, "key 0 must be RESERVED");
    } else if (is_builtin(key.pattern_text)) {
      key.kind = KeyDefinition::Kind::kBuiltin;
    } else {
      std::string_view rest = key.pattern_text;
      for (;;) {
        std::size_t bar = rest.find('|');
        try {
          key.patterns.push_back(parse_pattern(rest.substr(0, bar)));
        } catch (const PatternError &e) {
          throw KeyFileError(line_no, e.what());
        }
        if (bar == std::string_view::npos)
          break;
        rest.remove_prefix(bar + 1);
      }
    }
    seen[key.index] = 1;
    keys[key.index] = std::move(key);
    ++count;
  }
  if (count != kNumStructuralKeys)
    throw KeyFileError(line_no, "expected " + std::to_string(kNumStructuralKeys)
                                    + " keys, found " + std::to_string(count));
  return keys;
}

std::vector<KeyDefinition> load_key_file(const std::filesystem::path &path) {
  return parse_key_file(read_text_file(path));
}

StructuralKeys::StructuralKeys(std::vector<KeyDefinition> keys)
    : keys_(std::move(keys)) {
  if (keys_.size() != kNumStructuralKeys)
    throw std::invalid_argument("structural key table must have 167 keys");
}

StructuralKeys StructuralKeys::load(const std::filesystem::path &path) {
  std::string text = read_text_file(path);
  StructuralKeys keys(parse_key_file(text));
  spdlog::info("{}: {} keys, checksum {:016x}", path.filename().string(),
               keys.keys_.size(), content_checksum(text));
  return keys;
}

std::size_t StructuralKeys::count(const KeyDefinition &key,
                                  const Molecule &mol) const {
  switch (key.kind) {
  case KeyDefinition::Kind::kReserved:
    return 0;
  case KeyDefinition::Kind::kBuiltin:
    if (key.pattern_text == kBuiltinIsotopes) {
      return std::count_if(mol.atoms().begin(), mol.atoms().end(),
                           [](const Atom &a) { return a.isotope > 0; });
    }
    if (key.pattern_text == kBuiltinAromaticRings)
      return aromatic_ring_count(mol);
    return static_cast<std::size_t>(mol.num_fragments());
  case KeyDefinition::Kind::kPattern:
    break;
  }

  const std::size_t need = static_cast<std::size_t>(key.min_count);
  if (key.patterns.size() == 1) {
    std::set<std::vector<int>> sets;
    std::vector<int> atoms;
    for_each_match(key.patterns.front(), mol, [&](std::span<const int> m) {
      atoms.assign(m.begin(), m.end());
      std::sort(atoms.begin(), atoms.end());
      sets.insert(atoms);
      return sets.size() < need;
    });
    return sets.size();
  }
  std::set<int> roots;
  for (const Pattern &p: key.patterns) {
    for (int a = 0; a < static_cast<int>(mol.num_atoms()); ++a) {
      if (!roots.contains(a) && matches_at(p, mol, a))
        roots.insert(a);
    }
    if (roots.size() >= need)
      break;
  }
  return roots.size();
}

BitVector StructuralKeys::compute(const Molecule &mol) const {
  BitVector fp(kNumStructuralKeys);
  for (const KeyDefinition &key: keys_) {
    if (key.kind == KeyDefinition::Kind::kReserved)
      continue;
    if (count(key, mol) >= static_cast<std::size_t>(key.min_count))
      fp.set(key.index);
  }
  return fp;
}
}  // namespace solvo
