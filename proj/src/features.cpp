//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/features.h"

#include <algorithm>
#include <cmath>

namespace solvo {
FeatureMatrix FeatureMatrix::select(
    std::span<const std::size_t> indices) const {
  FeatureMatrix out(indices.size(), cols);
  out.layout_version = layout_version;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Featurizer::Featurizer(DescriptorCalculator descriptors, StructuralKeys keys)
    : descriptors_(std::move(descriptors)), keys_(std::move(keys)) { }

Featurizer Featurizer::load(const std::filesystem::path &data_dir) {
  return Featurizer(DescriptorCalculator::load(data_dir),
                    StructuralKeys::load(data_dir / "maccs_keys.txt"));
}

void Featurizer::molecule_features(const Molecule &mol,
                                   std::span<double> out) const {
  if (out.size() != kMoleculeFeatures)
    throw std::invalid_argument("molecule feature block has wrong length");
  auto desc = descriptors_.compute(mol).values();
  std::copy(desc.begin(), desc.end(), out.begin());

  std::fill(out.begin() + kNumDescriptors, out.end(), 0.0);
  const BitVector morgan = morgan_fingerprint(mol, kMorganRadius, kMorganBits);
  for (std::size_t b: morgan.set_bits())
    out[kNumDescriptors + b] = 1.0;
  const BitVector keys = keys_.compute(mol);
  for (std::size_t b: keys.set_bits())
    out[kNumDescriptors + kMorganBits + b] = 1.0;
}

std::vector<double> Featurizer::molecule_features(const Molecule &mol) const {
  std::vector<double> out(kMoleculeFeatures);
  molecule_features(mol, out);
  return out;
}

std::vector<double> Featurizer::pair_features(const Molecule &polymer,
                                              const Molecule &solvent) const {
  std::vector<double> out(kPairFeatures);
  std::span<double> all(out);
  molecule_features(polymer, all.first(kMoleculeFeatures));
  molecule_features(solvent, all.last(kMoleculeFeatures));
  return out;
}

const std::vector<double> &FeatureCache::get(const std::string &smiles) {
  auto it = cache_.find(smiles);
  if (it != cache_.end())
    return it->second;
  auto block = featurizer_.molecule_features(parse_smiles(smiles));
  return cache_.emplace(smiles, std::move(block)).first->second;
}

void FeatureCache::pair_features(const std::string &polymer,
                                 const std::string &solvent,
                                 std::span<double> out) {
  if (out.size() != kPairFeatures)
    throw std::invalid_argument("pair feature row has wrong length");
  const auto &p = get(polymer);
  const auto &s = get(solvent);
  std::copy(p.begin(), p.end(), out.begin());
  std::copy(s.begin(), s.end(), out.begin() + kMoleculeFeatures);
}

TargetStandardizer::TargetStandardizer(double mean, double std)
    : mean_(mean), std_(std) {
  if (!std::isfinite(mean) || !std::isfinite(std) || !(std > 0))
    throw DegenerateTarget("standardizer needs a finite mean and std > 0");
}

TargetStandardizer TargetStandardizer::fit(std::span<const double> y) {
  if (y.size() < 2)
    throw DegenerateTarget("need at least 2 targets to standardize");
  double mean = 0;
  for (double v: y)
    mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0;
  for (double v: y)
    ss += (v - mean) * (v - mean);
  double std = std::sqrt(ss / static_cast<double>(y.size()));
  if (!(std > 0))
    throw DegenerateTarget("targets have zero variance");
  return TargetStandardizer(mean, std);
}

std::vector<double> TargetStandardizer::transform(
    std::span<const double> y) const {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = transform(y[i]);
  return out;
}

std::vector<double> TargetStandardizer::inverse_transform(
    std::span<const double> z) const {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = inverse_transform(z[i]);
  return out;
}

FeatureScaler::FeatureScaler(std::vector<double> mean, std::vector<double> scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size())
    throw std::invalid_argument("scaler mean/scale length mismatch");
}

FeatureScaler FeatureScaler::fit(const FeatureMatrix &x) {
  std::vector<double> mean(x.cols, 0.0), scale(x.cols, 1.0);
  if (x.rows == 0)
    return FeatureScaler(std::move(mean), std::move(scale));
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      mean[j] += r[j];
  }
  for (double &m: mean)
    m /= static_cast<double>(x.rows);
  std::vector<double> ss(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      ss[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  }
  for (std::size_t j = 0; j < x.cols; ++j) {
    double sd = std::sqrt(ss[j] / static_cast<double>(x.rows));
    scale[j] = sd > 0 ? sd : 1.0;
  }
  return FeatureScaler(std::move(mean), std::move(scale));
}

void FeatureScaler::apply(FeatureMatrix &x) const {
  if (x.cols != mean_.size())
    throw std::invalid_argument("scaler width does not match features");
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      r[j] = (r[j] - mean_[j]) / scale_[j];
  }
}
}  // namespace solvo
