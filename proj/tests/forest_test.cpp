//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "solvo/forest.h"
#include "solvo/random.h"

namespace solvo {
namespace {
struct Data {
  FeatureMatrix x;
  std::vector<double> y;
};

Data random_data(std::size_t n, std::size_t d, std::uint64_t seed,
                 bool binary = false) {
  Rng rng(seed);
  Data out { FeatureMatrix(n, d), std::vector<double>(n) };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.x.values[i * d + j] =
          binary ? static_cast<double>(rng.below(2)) : rng.uniform();
    }
    out.y[i] = 3 * out.x(i, 0) - out.x(i, d - 1) + 0.3 * rng.normal();
  }
  return out;
}

double train_mse(const RandomForest &f, const Data &d) {
  const auto p = f.predict(d.x);
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (p[i] - d.y[i]) * (p[i] - d.y[i]);
  return s / static_cast<double>(p.size());
}

TEST(ForestTest, ConstantTarget) {
  Data d = random_data(30, 4, 1);
  std::fill(d.y.begin(), d.y.end(), 2.5);
  ForestConfig cfg;
  cfg.n_trees = 10;
  const auto forest = train_forest(d.x, d.y, cfg);
  for (double p: forest.predict(random_data(20, 4, 2).x))
    EXPECT_EQ(p, 2.5);
}

TEST(ForestTest, SingleTreeMemorizes) {
  const Data d = random_data(80, 5, 3);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  const auto forest = train_forest(d.x, d.y, cfg);
  EXPECT_EQ(train_mse(forest, d), 0.0);
}

TEST(ForestTest, StepFunction) {
  Rng rng(4);
  FeatureMatrix x(100, 1);
  std::vector<double> y(100);
  double below = 0, above = 1;
  for (std::size_t i = 0; i < 100; ++i) {
    x.values[i] = rng.uniform();
    y[i] = x.values[i] > 0.5 ? 1.0 : 0.0;
    if (x.values[i] <= 0.5)
      below = std::max(below, x.values[i]);
    else
      above = std::min(above, x.values[i]);
  }
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  const auto forest = train_forest(x, y, cfg);
  const TreeNode &root = forest.trees[0].nodes[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_GE(root.threshold, below);
  EXPECT_LT(root.threshold, above);

  FeatureMatrix held(200, 1);
  for (std::size_t i = 0; i < 200; ++i) {
    double v;
    do {
      v = rng.uniform();
    } while (v > below && v <= above);
    held.values[i] = v;
  }
  const auto p = forest.predict(held);
  for (std::size_t i = 0; i < 200; ++i)
    EXPECT_EQ(p[i] > 0.5, held.values[i] > 0.5) << held.values[i];
}

// Exhaustive enumeration: every feature, every threshold between sorted
// distinct values, scored by child SSE.
SplitCandidate exhaustive_split(const FeatureMatrix &x, const std::vector<double> &y,
                                const std::vector<std::size_t> &samples,
                                const std::vector<int> &features, int min_leaf) {
  SplitCandidate best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int f: features) {
    std::set<double> values;
    for (std::size_t s: samples)
      values.insert(x(s, f));
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double thr = (*it + *std::next(it)) / 2;
      double sl = 0, sr = 0, ql = 0, qr = 0;
      int nl = 0, nr = 0;
      for (std::size_t s: samples) {
        if (x(s, f) <= thr) {
          sl += y[s];
          ql += y[s] * y[s];
          ++nl;
        } else {
          sr += y[s];
          qr += y[s] * y[s];
          ++nr;
        }
      }
      if (nl < min_leaf || nr < min_leaf)
        continue;
      const double sse = ql - sl * sl / nl + qr - sr * sr / nr;
      if (sse < best_sse - 1e-12) {
        best_sse = sse;
        best.feature = f;
        best.threshold = thr;
        best.sse = sse;
      }
    }
  }
  return best;
}

TEST(SplitTest, MatchesExhaustiveSearch) {
  Rng rng(5);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(29);
    const bool binary = trial % 3 == 0;
    const Data d = random_data(n, 5, 1000 + trial, binary);
    std::vector<std::size_t> samples;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.below(4) != 0)
        samples.push_back(i);
    }
    if (samples.size() < 2)
      continue;
    std::vector<int> features { 0, 1, 2, 3, 4 };
    rng.shuffle(std::span<int>(features));
    features.resize(1 + rng.below(5));
    const int min_leaf = 1 + static_cast<int>(rng.below(3));
    const auto got = find_best_split(d.x, d.y, samples, features, min_leaf);
    const auto want = exhaustive_split(d.x, d.y, samples, features, min_leaf);
    ASSERT_EQ(got.feature >= 0, want.feature >= 0) << "trial " << trial;
    if (want.feature < 0)
      continue;
    EXPECT_NEAR(got.sse, want.sse, 1e-9) << "trial " << trial;
    // Both sides of the chosen threshold must partition the samples the
    // same way the exhaustive choice would for that feature and score.
    if (got.feature == want.feature) {
      for (std::size_t s: samples) {
        EXPECT_EQ(d.x(s, got.feature) <= got.threshold,
                  d.x(s, want.feature) <= want.threshold);
      }
    }
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(ForestTest, IdenticalTreesPredictLikeOne) {
  const Data d = random_data(40, 3, 6);
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.bootstrap = false;
  const auto forest = train_forest(d.x, d.y, cfg);
  for (std::size_t t = 1; t < forest.trees.size(); ++t) {
    ASSERT_EQ(forest.trees[t].nodes.size(), forest.trees[0].nodes.size());
  }
  const Data probe = random_data(25, 3, 7);
  const auto p = forest.predict(probe.x);
  for (std::size_t i = 0; i < probe.x.rows; ++i)
    EXPECT_DOUBLE_EQ(p[i], forest.trees[0].predict(probe.x.row(i)));
}

TEST(ForestTest, PredictionsWithinTrainingRange) {
  const Data d = random_data(60, 4, 8);
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.mtry = 2;
  const auto forest = train_forest(d.x, d.y, cfg);
  const auto [lo, hi] = std::minmax_element(d.y.begin(), d.y.end());
  Data probe = random_data(100, 4, 9);
  for (double &v: probe.x.values)
    v = v * 4 - 2;
  for (double p: forest.predict(probe.x)) {
    EXPECT_GE(p, *lo);
    EXPECT_LE(p, *hi);
  }
  EXPECT_EQ(forest.predict(probe.x), forest.predict(probe.x));
}

TEST(ForestTest, AddingTreesIsBounded) {
  const Data d = random_data(50, 4, 10);
  ForestConfig cfg;
  cfg.seed = 10;
  const Data probe = random_data(30, 4, 11);
  const auto [lo, hi] = std::minmax_element(d.y.begin(), d.y.end());
  const double range = *hi - *lo;
  for (int n = 1; n < 12; ++n) {
    cfg.n_trees = n;
    const auto small = train_forest(d.x, d.y, cfg);
    cfg.n_trees = n + 1;
    const auto big = train_forest(d.x, d.y, cfg);
    const auto a = small.predict(probe.x);
    const auto b = big.predict(probe.x);
    for (std::size_t i = 0; i < a.size(); ++i)
      EXPECT_LE(std::abs(a[i] - b[i]), range / (n + 1) + 1e-12);
  }
}

TEST(ForestTest, IndependentOfThreadCount) {
  const Data d = random_data(70, 6, 12);
  ForestConfig cfg;
  cfg.n_trees = 16;
  cfg.mtry = 3;
  cfg.seed = 12;
  cfg.threads = 1;
  const auto serial = train_forest(d.x, d.y, cfg);
  cfg.threads = 4;
  const auto parallel = train_forest(d.x, d.y, cfg);
  const Data probe = random_data(30, 6, 13);
  EXPECT_EQ(serial.predict(probe.x), parallel.predict(probe.x));
}

TEST(ForestTest, DepthAndLeafLimits) {
  const Data d = random_data(100, 3, 14);
  ForestConfig cfg;
  cfg.n_trees = 3;
  cfg.max_depth = 2;
  cfg.min_samples_leaf = 5;
  const auto forest = train_forest(d.x, d.y, cfg);
  for (const auto &tree: forest.trees) {
    EXPECT_LE(tree.depth(), 2);
    for (const TreeNode &n: tree.nodes) {
      if (n.is_leaf())
        EXPECT_GE(n.samples, 5);
    }
  }
}

TEST(ForestTest, Errors) {
  const Data d = random_data(10, 3, 15);
  ForestConfig cfg;
  cfg.n_trees = 0;
  EXPECT_THROW(train_forest(d.x, d.y, cfg), std::invalid_argument);
  cfg = {};
  cfg.mtry = 4;
  EXPECT_THROW(train_forest(d.x, d.y, cfg), std::invalid_argument);
  cfg = {};
  EXPECT_THROW(train_forest(FeatureMatrix(1, 3), std::vector<double> { 1.0 }, cfg),
               EmptyDataset);
  const auto forest = train_forest(d.x, d.y, cfg);
  EXPECT_THROW(forest.predict(FeatureMatrix(2, 4)), ShapeMismatch);
}
}  // namespace
}  // namespace solvo
