//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations shared by the unit tests and the
// acceptance binary.

#ifndef SOLVO_TESTS_ORACLES_H_
#define SOLVO_TESTS_ORACLES_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "solvo/dataio.h"
#include "solvo/features.h"
#include "solvo/mlp.h"
#include "solvo/molecule.h"
#include "solvo/pattern.h"
#include "solvo/random.h"

namespace solvo::testing {
// Matcher fixture: every pattern has at most 4 atoms, every molecule at
// most 8.
inline const std::vector<std::string_view> kMatcherPatterns = {
  "C", "c", "[OH]", "N", "[#7;R]", "C=O", "C-O", "CC", "C~O", "c:c",
  "[#6]=,:[#6]", "[!#6]", "[C,N,O]", "[D3]", "[X4]", "[H2]", "[R2]", "[r5]",
  "[r6]", "[+]", "[-]", "*~*", "a", "A", "[C;!R]", "C@C", "C!@C", "CC=O",
  "OCO", "C(C)C", "NC=O", "[#8]~[#6]~[#8]", "c1ccc1", "CC(C)C", "C=CC=C",
  "[!#1;!#6]~*~[!#1;!#6]", "O=CC=O", "[N,n]~*~*", "C#N", "[Cl,F]C",
  "C1CC1", "*1**1", "[D1][D2][D1]", "[CH3]C(=O)[O,N]",
};

inline const std::vector<std::string_view> kMatcherMolecules = {
  "C", "O", "CCO", "CCCC", "CC(C)=O", "CC(=O)O", "c1ccccc1", "Cc1ccccc1",
  "c1ccncc1", "C1CCOC1", "CN(C)C=O", "CS(C)=O", "CC#N", "CCOC(C)=O",
  "CN1CCCC1=O", "C1CC1N", "ClC(Cl)Cl", "FC(F)(F)CO", "CC(=O)[O-]",
  "C[N+](C)(C)C", "c1ccsc1", "C=Cc1ccccc1", "OCCO", "C1CC2CC1C2", "O=CC=O",
  "C=CC=C", "CC(C)(C)C(=O)N",
};

// Every injective query-atom to molecule-atom assignment, filtered by
// atom and bond constraints.
inline std::vector<std::vector<int>> brute_force_matches(const Pattern &p,
                                                         const Molecule &mol) {
  const int nq = static_cast<int>(p.num_atoms());
  const int nm = static_cast<int>(mol.num_atoms());
  std::vector<std::vector<int>> found;
  std::vector<int> map(nq, 0);
  const auto valid = [&] {
    for (int i = 0; i < nq; ++i) {
      for (int j = i + 1; j < nq; ++j) {
        if (map[i] == map[j])
          return false;
      }
      if (!p.atom(i).matches(mol, map[i]))
        return false;
    }
    for (const QueryBond &qb: p.bonds()) {
      const int b = mol.bond_between(map[qb.a], map[qb.b]);
      if (b < 0 || !qb.expr.matches(mol.bond(b)))
        return false;
    }
    return true;
  };
  while (true) {
    if (valid())
      found.push_back(map);
    int k = nq - 1;
    while (k >= 0 && ++map[k] == nm)
      map[k--] = 0;
    if (k < 0)
      break;
  }
  return found;
}

// Number of (pattern, molecule) pairs where the matcher and the brute-force
// enumeration disagree on the mapping set, count or any-match flag.
inline std::size_t matcher_disagreements() {
  std::size_t bad = 0;
  for (auto ptext: kMatcherPatterns) {
    const Pattern p = parse_pattern(ptext);
    for (auto mtext: kMatcherMolecules) {
      const Molecule mol = parse_smiles(mtext);
      auto expected = brute_force_matches(p, mol);
      const MatchSet got = match(p, mol);
      auto mappings = got.mappings;
      std::sort(expected.begin(), expected.end());
      std::sort(mappings.begin(), mappings.end());
      bad += mappings != expected || got.match_count != expected.size()
          || got.any_match != !expected.empty()
          || has_match(p, mol) != !expected.empty();
    }
  }
  return bad;
}

constexpr double kFdStep = 1e-5;
constexpr double kFdTolerance = 1e-4;
// Round-off in the loss, amplified by batch norm, leaves the h = 1e-5
// difference quotient with absolute noise near 1e-8. Gradients below this
// floor are held to an absolute bound of kFdTolerance * kFdFloor.
constexpr double kFdFloor = 1e-3;

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     Rng &rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.normal();
  }
  return m;
}

// Moves batch-norm scale/shift and biases away from their initial values
// so their gradients are exercised.
inline void perturb_affine(MLPModel &model, Rng &rng) {
  for (DenseLayer &layer: model.layers()) {
    for (Eigen::Index k = 0; k < layer.gamma.size(); ++k) {
      layer.gamma[k] = 0.5 + rng.uniform();
      layer.beta[k] = 0.5 * rng.normal();
    }
    for (Eigen::Index k = 0; k < layer.bias.size(); ++k)
      layer.bias[k] = 0.1 * rng.normal();
  }
}

// Largest |analytic - numeric| / max(|analytic|, |numeric|, kFdFloor) over
// all parameters, numeric by central differences of the train-mode loss.
inline double max_gradient_error(MLPModel model, const Eigen::MatrixXd &x,
                                 std::span<const double> targets) {
  Rng rng(0);
  Gradients grads = Gradients::zeros_like(model);
  compute_gradients(model, x, targets, 0.0, rng, grads);
  auto params = parameters(model);
  auto analytic = parameters(grads);
  double worst = 0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t k = 0; k < params[p].size; ++k) {
      double &w = params[p].data[k];
      const double saved = w;
      w = saved + kFdStep;
      const double up = batch_loss(model, x, targets, Mode::kTrain);
      w = saved - kFdStep;
      const double down = batch_loss(model, x, targets, Mode::kTrain);
      w = saved;
      const double numeric = (up - down) / (2 * kFdStep);
      const double a = analytic[p].data[k];
      const double scale = std::max({ std::abs(a), std::abs(numeric), kFdFloor });
      worst = std::max(worst, std::abs(a - numeric) / scale);
    }
  }
  return worst;
}

// 10 -> 8 -> 4 -> 1 net, batch of 4, dropout 0. Returns the largest error
// over seeds 1..5.
inline double gradient_check(Head head, LayerOrder order, bool batch_norm) {
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ModelOptions opts;
    opts.head = head;
    opts.order = order;
    opts.batch_norm = batch_norm;
    MLPModel model = MLPModel::init({ 10, 8, 4, 1 }, opts, seed);
    Rng rng(100 + seed);
    perturb_affine(model, rng);
    const Eigen::MatrixXd x = random_matrix(4, 10, rng);
    std::vector<double> y(4);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = head == Head::kClassification ? static_cast<double>(i % 2)
                                           : rng.normal();
    }
    worst = std::max(worst, max_gradient_error(model, x, y));
  }
  return worst;
}

struct Task {
  FeatureMatrix x;
  std::vector<double> y;
};

// Smooth nonlinear regression target on Gaussian inputs.
inline Task synthetic_task(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Task t { FeatureMatrix(n, d), std::vector<double>(n) };
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = rng.normal();
      t.x.values[i * d + j] = v;
      s += std::sin(v * (j + 1));
    }
    t.y[i] = s / std::sqrt(static_cast<double>(d));
  }
  return t;
}

// Training MSE after fitting 64 samples with dropout 0 for up to 2000
// epochs.
inline double overfit_mse() {
  const Task task = synthetic_task(64, 16, 41);
  std::vector<int> dims = default_dims();
  dims.front() = 16;
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.weight_decay = 0;
  cfg.dropout = 0;
  cfg.max_epochs = 2000;
  cfg.patience = 2000;
  cfg.seed = 41;
  const auto result = train(MLPModel::init(dims, {}, 41), task.x, task.y,
                            task.x, task.y, cfg);
  return mse_loss(predict_raw(result.model, task.x), task.y);
}

// Replicate rows: one complete group (mean 3 wt%), one 4-replicate group,
// and one group with a 2 atm row among 5 atmospheric ones.
inline std::vector<ReplicateRecord> external_fixture() {
  std::vector<ReplicateRecord> rows;
  for (double f: { 0.01, 0.02, 0.03, 0.04, 0.05 })
    rows.push_back({ "CC", "O", f, 1.0 });
  for (double f: { 0.1, 0.1, 0.1, 0.1 })
    rows.push_back({ "CC(C)", "O", f, 1.0 });
  for (double f: { 0.2, 0.2, 0.2, 0.2, 0.2 })
    rows.push_back({ "CC(Cl)", "CCO", f, 0.99 });
  rows.push_back({ "CC(Cl)", "CCO", 0.9, 2.0 });
  return rows;
}
// Descriptor columns on a wide scale, fingerprint columns binary.
inline FeatureMatrix random_features(std::size_t rows, std::size_t cols, Rng &rng) {
  FeatureMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      x.values[i * cols + j] =
          j < kNumDescriptors ? 100 * rng.normal() : static_cast<double>(rng.below(2));
    }
  }
  return x;
}

// Default-shaped network with every parameter and running statistic moved
// off its initial value.
inline MLPModel trained_like_model(std::uint64_t seed) {
  MLPModel m = MLPModel::init(default_dims(), {}, seed);
  Rng rng(seed);
  for (auto &p: parameters(m)) {
    for (std::size_t k = 0; k < p.size; ++k)
      p.data[k] += 0.01 * rng.normal();
  }
  for (DenseLayer &layer: m.layers()) {
    for (Eigen::Index k = 0; k < layer.running_mean.size(); ++k) {
      layer.running_mean[k] = rng.normal();
      layer.running_var[k] = 0.5 + rng.uniform();
    }
  }
  m.standardizer = TargetStandardizer(4.2, 7.7);
  return m;
}

// Model file round trip: predictions on 100 random pair rows must be
// bit-identical before and after.
inline bool round_trip_bit_exact(const std::filesystem::path &path) {
  const MLPModel model = trained_like_model(7);
  save_model(path, model, "{\"seed\":7}");
  const LoadedModel loaded = load_model(path);
  Rng rng(8);
  const FeatureMatrix x = random_features(100, kPairFeatures, rng);
  const auto a = predict_wt(model, x);
  const auto b = predict_wt(loaded.model, x);
  if (a.size() != 100 || b.size() != 100 || !(loaded.model == model))
    return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i]))
      return false;
  }
  return true;
}

}  // namespace solvo::testing

#endif  // SOLVO_TESTS_ORACLES_H_
