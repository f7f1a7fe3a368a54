//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/forest.h"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include <spdlog/spdlog.h>

namespace solvo {
namespace {
// Feature-major copy of the training matrix; each split scans one
// feature across the node's samples.
struct Columns {
  std::size_t rows = 0;
  std::vector<std::vector<double>> data;
  std::vector<char> binary;  // every value is 0 or 1
  bool all_constant = true;

  explicit Columns(const FeatureMatrix &x)
      : rows(x.rows), data(x.cols, std::vector<double>(x.rows)),
        binary(x.cols, 1) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      auto r = x.row(i);
      for (std::size_t j = 0; j < x.cols; ++j) {
        data[j][i] = r[j];
        if (r[j] != 0.0 && r[j] != 1.0)
          binary[j] = 0;
      }
    }
    for (const auto &col: data) {
      if (!col.empty() && std::any_of(col.begin(), col.end(), [&](double v) {
            return v != col.front();
          }))
        all_constant = false;
    }
  }
};

SplitCandidate best_split(const Columns &cols, std::span<const double> y,
                          std::span<const std::size_t> samples,
                          std::span<const int> features, int min_leaf,
                          std::vector<std::pair<double, double>> &xy) {
  const std::size_t n = samples.size();
  const std::size_t leaf = static_cast<std::size_t>(min_leaf);
  double total = 0, total_sq = 0;
  for (std::size_t s: samples) {
    total += y[s];
    total_sq += y[s] * y[s];
  }

  // Minimizing child SSE is maximizing sum_l^2 / n_l + sum_r^2 / n_r.
  SplitCandidate best;
  double best_gain = -1;
  auto consider = [&](int f, double thr, std::size_t nl, double sl) {
    const std::size_t nr = n - nl;
    if (nl < leaf || nr < leaf)
      return;
    const double sr = total - sl;
    const double gain = sl * sl / static_cast<double>(nl)
                      + sr * sr / static_cast<double>(nr);
    if (gain > best_gain) {
      best_gain = gain;
      best.feature = f;
      best.threshold = thr;
    }
  };

  for (int f: features) {
    const std::vector<double> &col = cols.data[f];
    if (cols.binary[f]) {
      std::size_t n0 = 0;
      double s0 = 0;
      for (std::size_t s: samples) {
        if (col[s] == 0.0) {
          ++n0;
          s0 += y[s];
        }
      }
      if (n0 > 0 && n0 < n)
        consider(f, 0.5, n0, s0);
      continue;
    }
    xy.clear();
    for (std::size_t s: samples)
      xy.emplace_back(col[s], y[s]);
    std::sort(xy.begin(), xy.end());
    double sl = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      sl += xy[i].second;
      const double lo = xy[i].first;
      const double hi = xy[i + 1].first;
      if (lo == hi)
        continue;
      double mid = lo + (hi - lo) / 2;
      if (mid >= hi)
        mid = lo;
      consider(f, mid, i + 1, sl);
    }
  }
  if (best.feature >= 0)
    best.sse = std::max(0.0, total_sq - best_gain);
  return best;
}

RegressionTree grow_tree(const Columns &cols, std::span<const double> y,
                         const ForestConfig &config, int mtry, Rng rng) {
  const std::size_t n = cols.rows;
  std::vector<std::size_t> samples(n);
  if (config.bootstrap) {
    for (auto &s: samples)
      s = static_cast<std::size_t>(rng.below(n));
  } else {
    std::iota(samples.begin(), samples.end(), 0);
  }
  std::vector<int> features(cols.data.size());
  std::iota(features.begin(), features.end(), 0);
  const std::size_t n_features = features.size();
  const std::size_t leaf = static_cast<std::size_t>(config.min_samples_leaf);
  std::vector<std::pair<double, double>> scratch;

  struct Task {
    int node;
    std::size_t begin;
    std::size_t end;
    int depth;
  };
  RegressionTree tree;
  tree.nodes.emplace_back();
  std::vector<Task> stack { { 0, 0, n, 0 } };
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    std::span<std::size_t> seg(samples.data() + task.begin,
                               task.end - task.begin);
    double sum = 0;
    double lo = y[seg.front()], hi = lo;
    for (std::size_t s: seg) {
      sum += y[s];
      lo = std::min(lo, y[s]);
      hi = std::max(hi, y[s]);
    }
    TreeNode &node = tree.nodes[task.node];
    node.value = sum / static_cast<double>(seg.size());
    node.samples = seg.size();
    if (seg.size() < 2 * leaf || lo == hi
        || (config.max_depth && task.depth >= *config.max_depth))
      continue;

    std::span<const int> candidates(features);
    if (static_cast<std::size_t>(mtry) < n_features) {
      for (int k = 0; k < mtry; ++k) {
        const std::size_t j = k + rng.below(n_features - k);
        std::swap(features[k], features[j]);
      }
      candidates = candidates.first(mtry);
    }
    const SplitCandidate split =
        best_split(cols, y, seg, candidates, config.min_samples_leaf, scratch);
    if (split.feature < 0)
      continue;

    const std::vector<double> &col = cols.data[split.feature];
    auto mid = std::stable_partition(seg.begin(), seg.end(), [&](std::size_t s) {
      return col[s] <= split.threshold;
    });
    const std::size_t cut = task.begin + (mid - seg.begin());
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode &parent = tree.nodes[task.node];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left;
    parent.right = left + 1;
    stack.push_back({ left + 1, cut, task.end, task.depth + 1 });
    stack.push_back({ left, task.begin, cut, task.depth + 1 });
  }
  return tree;
}
}  // namespace

void ForestConfig::validate(std::size_t n_features) const {
  if (n_trees < 1)
    throw std::invalid_argument("forest needs at least one tree");
  if (min_samples_leaf < 1)
    throw std::invalid_argument("min_samples_leaf must be at least 1");
  if (max_depth && *max_depth < 0)
    throw std::invalid_argument("max_depth must be non-negative");
  if (mtry && (*mtry < 1 || static_cast<std::size_t>(*mtry) > n_features))
    throw std::invalid_argument("mtry must be in [1, feature count]");
  if (threads < 0)
    throw std::invalid_argument("thread count must be non-negative");
}

double RegressionTree::predict(std::span<const double> row) const {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode &n = nodes[i];
    i = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[i].value;
}

int RegressionTree::depth() const {
  int deepest = 0;
  std::vector<std::pair<int, int>> stack { { 0, 0 } };
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].is_leaf()) {
      stack.emplace_back(nodes[i].left, d + 1);
      stack.emplace_back(nodes[i].right, d + 1);
    }
  }
  return deepest;
}

SplitCandidate find_best_split(const FeatureMatrix &x, std::span<const double> y,
                               std::span<const std::size_t> samples,
                               std::span<const int> features,
                               int min_samples_leaf) {
  if (y.size() != x.rows)
    throw ShapeMismatch("target count does not match feature rows");
  Columns cols(x);
  std::vector<std::pair<double, double>> scratch;
  return best_split(cols, y, samples, features, min_samples_leaf, scratch);
}

std::vector<double> RandomForest::predict(const FeatureMatrix &x) const {
  if (x.cols != n_features)
    throw ShapeMismatch("features have " + std::to_string(x.cols)
                        + " columns, forest expects "
                        + std::to_string(n_features));
  std::vector<double> out(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double s = 0;
    for (const RegressionTree &t: trees)
      s += t.predict(x.row(i));
    out[i] = s / static_cast<double>(trees.size());
  }
  return out;
}

RandomForest train_forest(const FeatureMatrix &x, std::span<const double> y,
                          const ForestConfig &config) {
  config.validate(x.cols);
  if (x.rows < 2)
    throw EmptyDataset("forest needs at least 2 training rows");
  if (y.size() != x.rows)
    throw ShapeMismatch("target count does not match feature rows");

  const Columns cols(x);
  if (cols.all_constant)
    spdlog::warn("all features are constant; trees will be single leaves");
  const int mtry = config.mtry.value_or(static_cast<int>(x.cols));

  RandomForest forest;
  forest.n_features = x.cols;
  forest.trees.resize(config.n_trees);
  std::atomic<int> next { 0 };
  auto worker = [&] {
    for (int t; (t = next++) < config.n_trees;) {
      forest.trees[t] =
          grow_tree(cols, y, config, mtry, Rng::stream(config.seed, t));
    }
  };
  int threads = config.threads > 0
                  ? config.threads
                  : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.n_trees);
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < threads; ++i)
      pool.emplace_back(worker);
    worker();
  }
  return forest;
}
}  // namespace solvo
