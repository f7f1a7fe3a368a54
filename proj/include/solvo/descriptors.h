//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_DESCRIPTORS_H_
#define SOLVO_DESCRIPTORS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solvo/molecule.h"
#include "solvo/pattern.h"

namespace solvo {
inline constexpr std::size_t kNumDescriptors = 6;

struct DescriptorVector {
  double mol_weight = 0;
  double logp = 0;
  double tpsa = 0;
  int hbd = 0;
  int hba = 0;
  int rot_bonds = 0;

  // (mol_weight, logp, tpsa, hbd, hba, rot_bonds)
  std::array<double, kNumDescriptors> values() const;
};

class UnknownElement: public std::runtime_error {
public:
  explicit UnknownElement(std::string symbol)
      : std::runtime_error("no atomic weight for element " + symbol),
        symbol_(std::move(symbol)) { }

  const std::string &symbol() const { return symbol_; }

private:
  std::string symbol_;
};

class UntypedAtom: public std::runtime_error {
public:
  explicit UntypedAtom(int index)
      : std::runtime_error("no Crippen atom type matches atom "
                           + std::to_string(index)),
        index_(index) { }

  int index() const { return index_; }

private:
  int index_;
};

class TableError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One row of a contribution table. Rows are tried in file order and the
// first pattern that matches with its query atom 0 on the atom wins.
struct ContributionRule {
  Pattern pattern;
  double value = 0;
  std::string label;
};

// Tab-separated "pattern <TAB> contribution [<TAB> label]" lines; '#'
// starts a comment line, blank lines are skipped.
class ContributionTable {
public:
  static ContributionTable parse(std::string_view text,
                                 std::string_view name = "table");
  static ContributionTable load(const std::filesystem::path &path);

  const std::vector<ContributionRule> &rules() const { return rules_; }
  std::uint64_t checksum() const { return checksum_; }

  // Index of the first rule anchored at atom, -1 when none matches.
  int classify(const Molecule &mol, int atom) const;

private:
  std::vector<ContributionRule> rules_;
  std::uint64_t checksum_ = 0;
};

// Bond patterns whose query bond 0-1 is never rotatable; one pattern per
// line with an optional tab-separated comment.
class BondExclusions {
public:
  static BondExclusions parse(std::string_view text,
                              std::string_view name = "table");
  static BondExclusions load(const std::filesystem::path &path);

  const std::vector<Pattern> &patterns() const { return patterns_; }
  std::uint64_t checksum() const { return checksum_; }

private:
  std::vector<Pattern> patterns_;
  std::uint64_t checksum_ = 0;
};

// Sum of standard atomic weights over all atoms and hydrogens; isotope
// labelled atoms use their isotopic mass. Throws UnknownElement.
double mol_weight(const Molecule &mol);

// Wildman-Crippen atom contributions on the hydrogen-complete graph.
// Throws UntypedAtom.
double crippen_logp(const Molecule &mol, const ContributionTable &table);

// Ertl polar surface from N and O atoms. Atoms without a rule add 0 and
// are logged at debug level.
double tpsa(const Molecule &mol, const ContributionTable &table);

// N/O atoms carrying at least one hydrogen.
int hbd_count(const Molecule &mol);
// All N/O atoms.
int hba_count(const Molecule &mol);
// Acyclic single bonds between atoms of heavy degree >= 2, minus bonds
// matched by the exclusion patterns.
int rot_bonds(const Molecule &mol, const BondExclusions &exclusions);

// Loaded descriptor tables; construction logs each table checksum.
class DescriptorCalculator {
public:
  DescriptorCalculator(ContributionTable crippen, ContributionTable tpsa,
                       BondExclusions rotatable);

  // crippen.tsv, tpsa.tsv and rotatable_exclusions.tsv from dir.
  static DescriptorCalculator load(const std::filesystem::path &dir);

  DescriptorVector compute(const Molecule &mol) const;

  const ContributionTable &crippen() const { return crippen_; }
  const ContributionTable &tpsa_table() const { return tpsa_; }
  const BondExclusions &rotatable() const { return rotatable_; }

private:
  ContributionTable crippen_;
  ContributionTable tpsa_;
  BondExclusions rotatable_;
};
}  // namespace solvo

#endif  // SOLVO_DESCRIPTORS_H_
