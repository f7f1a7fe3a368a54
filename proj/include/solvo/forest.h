//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_FOREST_H_
#define SOLVO_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "solvo/features.h"
#include "solvo/mlp.h"

namespace solvo {
struct ForestConfig {
  int n_trees = 100;
  std::optional<int> max_depth;  // unlimited when empty
  int min_samples_leaf = 1;
  std::optional<int> mtry;  // all features when empty
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency; results do not depend on it

  // Throws std::invalid_argument.
  void validate(std::size_t n_features) const;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0;  // x <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0;  // mean training target in the node
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
public:
  std::vector<TreeNode> nodes;  // root first

  double predict(std::span<const double> row) const;
  int depth() const;
};

struct SplitCandidate {
  int feature = -1;  // -1 when no valid split exists
  double threshold = 0;
  double sse = 0;  // summed squared error of the two children
};

// Best variance-minimizing split of y[samples] over the listed features,
// with both children holding at least min_samples_leaf samples. Ties go
// to the earlier feature in the list, then the lower threshold.
SplitCandidate find_best_split(const FeatureMatrix &x, std::span<const double> y,
                               std::span<const std::size_t> samples,
                               std::span<const int> features,
                               int min_samples_leaf);

class RandomForest {
public:
  std::vector<RegressionTree> trees;
  std::size_t n_features = 0;

  // Unweighted mean over trees. Throws ShapeMismatch.
  std::vector<double> predict(const FeatureMatrix &x) const;
};

// Throws EmptyDataset for fewer than 2 rows and ShapeMismatch when the
// target count differs from the row count.
RandomForest train_forest(const FeatureMatrix &x, std::span<const double> y,
                          const ForestConfig &config);
}  // namespace solvo

#endif  // SOLVO_FOREST_H_
