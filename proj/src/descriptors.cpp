//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/descriptors.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "solvo/data_files.h"
#include "solvo/elements.h"

namespace solvo {
namespace {
constexpr double kHydrogenWeight = 1.008;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos)
      break;
    start = tab + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Calls row(line_number, fields) for every non-comment, non-blank line.
template <typename Fn>
void for_each_row(std::string_view text, Fn row) {
  int line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#')
      continue;
    row(line_no, split_tabs(line));
  }
}

[[noreturn]] void table_error(std::string_view name, int line,
                              const std::string &reason) {
  throw TableError(std::string(name) + ":" + std::to_string(line) + ": "
                   + reason);
}
}  // namespace

std::array<double, kNumDescriptors> DescriptorVector::values() const {
  return { mol_weight,
           logp,
           tpsa,
           static_cast<double>(hbd),
           static_cast<double>(hba),
           static_cast<double>(rot_bonds) };
}

ContributionTable ContributionTable::parse(std::string_view text,
                                           std::string_view name) {
  ContributionTable table;
  table.checksum_ = content_checksum(std::string(text));
  for_each_row(text, [&](int line, const std::vector<std::string_view> &f) {
    if (f.size() < 2)
      table_error(name, line, "expected pattern<TAB>contribution");
    ContributionRule rule;
    try {
      rule.pattern = parse_pattern(trim(f[0]));
    } catch (const PatternError &e) {
      table_error(name, line, e.what());
    }
    std::string_view num = trim(f[1]);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(),
                                     rule.value);
    if (ec != std::errc {} || ptr != num.data() + num.size()
        || !std::isfinite(rule.value))
      table_error(name, line, "bad contribution '" + std::string(num) + "'");
    if (f.size() > 2)
      rule.label = std::string(trim(f[2]));
    table.rules_.push_back(std::move(rule));
  });
  if (table.rules_.empty())
    throw TableError(std::string(name) + ": no rules");
  return table;
}

ContributionTable ContributionTable::load(const std::filesystem::path &path) {
  return parse(read_text_file(path), path.string());
}

int ContributionTable::classify(const Molecule &mol, int atom) const {
  for (std::size_t k = 0; k < rules_.size(); ++k) {
    if (matches_at(rules_[k].pattern, mol, atom))
      return static_cast<int>(k);
  }
  return -1;
}

BondExclusions BondExclusions::parse(std::string_view text,
                                     std::string_view name) {
  BondExclusions ex;
  ex.checksum_ = content_checksum(std::string(text));
  for_each_row(text, [&](int line, const std::vector<std::string_view> &f) {
    try {
      Pattern p = parse_pattern(trim(f[0]));
      if (p.num_atoms() < 2 || p.bond_between(0, 1) < 0)
        table_error(name, line, "query atoms 0 and 1 must be bonded");
      ex.patterns_.push_back(std::move(p));
    } catch (const PatternError &e) {
      table_error(name, line, e.what());
    }
  });
  return ex;
}

BondExclusions BondExclusions::load(const std::filesystem::path &path) {
  return parse(read_text_file(path), path.string());
}

namespace {
// Sums in sorted order so the result does not depend on atom numbering,
// which differs between renderings of the same molecule.
double ordered_sum(std::vector<double> &terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}
}  // namespace

double mol_weight(const Molecule &mol) {
  std::vector<double> terms;
  for (const Atom &atom: mol.atoms()) {
    if (atom.isotope > 0) {
      terms.push_back(isotope_mass(atom.atomic_number, atom.isotope));
    } else {
      auto w = standard_atomic_weight(atom.atomic_number);
      if (!w)
        throw UnknownElement(std::string(element_symbol(atom.atomic_number)));
      terms.push_back(*w);
    }
    terms.push_back((atom.implicit_h + atom.explicit_h) * kHydrogenWeight);
  }
  return ordered_sum(terms);
}

double crippen_logp(const Molecule &mol, const ContributionTable &table) {
  const Molecule full = add_hydrogens(mol);
  std::vector<double> terms;
  for (int i = 0; i < static_cast<int>(full.num_atoms()); ++i) {
    int rule = table.classify(full, i);
    // indices past mol.num_atoms() are the added hydrogens
    if (rule < 0)
      throw UntypedAtom(i);
    terms.push_back(table.rules()[rule].value);
  }
  return ordered_sum(terms);
}

double tpsa(const Molecule &mol, const ContributionTable &table) {
  std::vector<double> terms;
  for (int i = 0; i < static_cast<int>(mol.num_atoms()); ++i) {
    int z = mol.atom(i).atomic_number;
    if (z != 7 && z != 8)
      continue;
    int rule = table.classify(mol, i);
    if (rule < 0) {
      spdlog::debug("tpsa: no rule for atom {} (Z={})", i, z);
      continue;
    }
    terms.push_back(table.rules()[rule].value);
  }
  return ordered_sum(terms);
}

int hbd_count(const Molecule &mol) {
  int n = 0;
  for (int i = 0; i < static_cast<int>(mol.num_atoms()); ++i) {
    int z = mol.atom(i).atomic_number;
    n += (z == 7 || z == 8) && mol.total_h(i) > 0;
  }
  return n;
}

int hba_count(const Molecule &mol) {
  int n = 0;
  for (const Atom &atom: mol.atoms())
    n += atom.atomic_number == 7 || atom.atomic_number == 8;
  return n;
}

int rot_bonds(const Molecule &mol, const BondExclusions &exclusions) {
  std::set<int> excluded;
  for (const Pattern &p: exclusions.patterns()) {
    for_each_match(p, mol, [&](std::span<const int> m) {
      excluded.insert(mol.bond_between(m[0], m[1]));
      return true;
    });
  }
  int n = 0;
  for (int k = 0; k < static_cast<int>(mol.num_bonds()); ++k) {
    const Bond &bd = mol.bond(k);
    if (bd.order != BondOrder::kSingle || bd.in_ring)
      continue;
    if (mol.atom(bd.a).atomic_number == 1 || mol.atom(bd.b).atomic_number == 1)
      continue;
    if (mol.heavy_degree(bd.a) < 2 || mol.heavy_degree(bd.b) < 2)
      continue;
    n += !excluded.contains(k);
  }
  return n;
}

DescriptorCalculator::DescriptorCalculator(ContributionTable crippen,
                                           ContributionTable tpsa,
                                           BondExclusions rotatable)
    : crippen_(std::move(crippen)), tpsa_(std::move(tpsa)),
      rotatable_(std::move(rotatable)) { }

DescriptorCalculator DescriptorCalculator::load(
    const std::filesystem::path &dir) {
  DescriptorCalculator calc(ContributionTable::load(dir / "crippen.tsv"),
                            ContributionTable::load(dir / "tpsa.tsv"),
                            BondExclusions::load(dir / "rotatable_exclusions.tsv"));
  spdlog::info("crippen.tsv: {} rules, checksum {:016x}",
               calc.crippen_.rules().size(), calc.crippen_.checksum());
  spdlog::info("tpsa.tsv: {} rules, checksum {:016x}",
               calc.tpsa_.rules().size(), calc.tpsa_.checksum());
  spdlog::info("rotatable_exclusions.tsv: {} patterns, checksum {:016x}",
               calc.rotatable_.patterns().size(), calc.rotatable_.checksum());
  return calc;
}

DescriptorVector DescriptorCalculator::compute(const Molecule &mol) const {
  DescriptorVector d;
  d.mol_weight = mol_weight(mol);
  d.logp = crippen_logp(mol, crippen_);
  d.tpsa = tpsa(mol, tpsa_);
  d.hbd = hbd_count(mol);
  d.hba = hba_count(mol);
  d.rot_bonds = rot_bonds(mol, rotatable_);
  return d;
}
}  // namespace solvo
