//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_FEATURES_H_
#define SOLVO_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "solvo/descriptors.h"
#include "solvo/fingerprints.h"
#include "solvo/molecule.h"

namespace solvo {
// Per-molecule layout: [6 descriptors | 1024 Morgan bits | 167 key bits].
// A pair is [polymer block | solvent block]. Bump the version whenever an
// index changes meaning.
inline constexpr std::uint32_t kLayoutVersion = 1;
inline constexpr std::size_t kMoleculeFeatures =
    kNumDescriptors + kMorganBits + kNumStructuralKeys;
inline constexpr std::size_t kPairFeatures = 2 * kMoleculeFeatures;

static_assert(kMoleculeFeatures == 1197);

// Dense row-major matrix of feature rows.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t layout_version = kLayoutVersion;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0.0) { }

  std::span<double> row(std::size_t i) {
    return { values.data() + i * cols, cols };
  }
  std::span<const double> row(std::size_t i) const {
    return { values.data() + i * cols, cols };
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values[i * cols + j];
  }

  // Rows in the given order.
  FeatureMatrix select(std::span<const std::size_t> indices) const;
};

class Featurizer {
public:
  Featurizer(DescriptorCalculator descriptors, StructuralKeys keys);
  // Tables and key file from a data directory.
  static Featurizer load(const std::filesystem::path &data_dir);

  // Writes kMoleculeFeatures values into out.
  void molecule_features(const Molecule &mol, std::span<double> out) const;
  std::vector<double> molecule_features(const Molecule &mol) const;

  std::vector<double> pair_features(const Molecule &polymer,
                                    const Molecule &solvent) const;

  const DescriptorCalculator &descriptors() const { return descriptors_; }
  const StructuralKeys &keys() const { return keys_; }

private:
  DescriptorCalculator descriptors_;
  StructuralKeys keys_;
};

// Memoizes molecule blocks by SMILES text; datasets repeat the same few
// polymers across thousands of rows. Not thread-safe.
class FeatureCache {
public:
  explicit FeatureCache(const Featurizer &featurizer)
      : featurizer_(featurizer) { }

  // Parses on first use; throws SmilesError and descriptor errors.
  const std::vector<double> &get(const std::string &smiles);

  void pair_features(const std::string &polymer, const std::string &solvent,
                     std::span<double> out);

private:
  const Featurizer &featurizer_;
  std::map<std::string, std::vector<double>> cache_;
};

class DegenerateTarget: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// z = (y - mean) / std with the population standard deviation.
class TargetStandardizer {
public:
  TargetStandardizer() = default;
  TargetStandardizer(double mean, double std);

  // Throws DegenerateTarget for fewer than 2 values or zero variance.
  static TargetStandardizer fit(std::span<const double> y);

  double mean() const { return mean_; }
  double std() const { return std_; }

  double transform(double y) const { return (y - mean_) / std_; }
  double inverse_transform(double z) const { return z * std_ + mean_; }
  std::vector<double> transform(std::span<const double> y) const;
  std::vector<double> inverse_transform(std::span<const double> z) const;

private:
  double mean_ = 0;
  double std_ = 1;
};

// Optional per-column input standardization; off by default. Constant
// columns keep scale 1 so binary bits that never vary pass through
// shifted only.
class FeatureScaler {
public:
  FeatureScaler() = default;
  FeatureScaler(std::vector<double> mean, std::vector<double> scale);

  static FeatureScaler fit(const FeatureMatrix &x);

  const std::vector<double> &mean() const { return mean_; }
  const std::vector<double> &scale() const { return scale_; }

  void apply(FeatureMatrix &x) const;

private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};
}  // namespace solvo

#endif  // SOLVO_FEATURES_H_
