//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_FINGERPRINTS_H_
#define SOLVO_FINGERPRINTS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solvo/molecule.h"
#include "solvo/pattern.h"

namespace solvo {
inline constexpr int kMorganRadius = 2;
inline constexpr std::size_t kMorganBits = 1024;
inline constexpr std::size_t kNumStructuralKeys = 167;

class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t length)
      : length_(length), words_((length + 63) / 64, 0) { }

  std::size_t size() const { return length_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t { 1 } << (i % 64); }
  std::size_t popcount() const;
  std::vector<std::size_t> set_bits() const;

  friend bool operator==(const BitVector &, const BitVector &) = default;

private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// One surviving circular environment before folding.
struct MorganEnvironment {
  std::uint64_t id;
  int radius;
  int center;
};

// Unfolded identifiers after duplicate-environment removal, in iteration
// order then center order. Exposed so tests can check the folding.
std::vector<MorganEnvironment> morgan_environments(const Molecule &mol,
                                                   int radius = kMorganRadius);

// Extended-connectivity fingerprint: bit (id mod nbits) for every
// surviving environment. nbits must be a power of two.
BitVector morgan_fingerprint(const Molecule &mol, int radius = kMorganRadius,
                             std::size_t nbits = kMorganBits);

struct KeyDefinition {
  enum class Kind { kReserved, kPattern, kBuiltin };

  int index = 0;
  int min_count = 1;
  std::string pattern_text;
  std::string comment;
  Kind kind = Kind::kPattern;
  // Alternatives separated by '|' in the file. A single pattern counts
  // distinct matched atom sets; several count distinct root atoms.
  std::vector<Pattern> patterns;
};

class KeyFileError: public std::runtime_error {
public:
  KeyFileError(int line, const std::string &reason)
      : std::runtime_error("key file line " + std::to_string(line) + ": "
                           + reason),
        line_(line) { }

  int line() const { return line_; }

private:
  int line_;
};

// Builtin predicates usable in place of a pattern.
inline constexpr std::string_view kBuiltinIsotopes = "isotope_atoms";
inline constexpr std::string_view kBuiltinAromaticRings = "aromatic_rings";
inline constexpr std::string_view kBuiltinFragments = "fragments";

// Throws KeyFileError; the result is indexed by key_index.
std::vector<KeyDefinition> parse_key_file(std::string_view text);
std::vector<KeyDefinition> load_key_file(const std::filesystem::path &path);

class StructuralKeys {
public:
  explicit StructuralKeys(std::vector<KeyDefinition> keys);
  // Loads and logs the file checksum.
  static StructuralKeys load(const std::filesystem::path &path);

  const std::vector<KeyDefinition> &keys() const { return keys_; }

  // Occurrence count of one key, capped once min_count is reached (0 for
  // the reserved key).
  std::size_t count(const KeyDefinition &key, const Molecule &mol) const;
  BitVector compute(const Molecule &mol) const;

private:
  std::vector<KeyDefinition> keys_;
};
}  // namespace solvo

#endif  // SOLVO_FINGERPRINTS_H_
