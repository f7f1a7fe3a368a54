//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.h"
#include "solvo/metrics.h"
#include "solvo/mlp.h"
#include "solvo/random.h"

namespace solvo {
namespace {
using testing::gradient_check;
using testing::kFdTolerance;
using testing::random_matrix;
using testing::synthetic_task;
using testing::Task;

FeatureMatrix to_features(const Eigen::MatrixXd &m) {
  FeatureMatrix x(static_cast<std::size_t>(m.rows()),
                  static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      x.values[i * m.cols() + j] = m(i, j);
  }
  return x;
}

struct GradCase {
  Head head;
  LayerOrder order;
  bool batch_norm;
};

class GradientCheckTest: public ::testing::TestWithParam<GradCase> { };

TEST_P(GradientCheckTest, MatchesCentralDifferences) {
  const GradCase c = GetParam();
  EXPECT_LE(gradient_check(c.head, c.order, c.batch_norm), kFdTolerance);
}

INSTANTIATE_TEST_SUITE_P(
    Heads, GradientCheckTest,
    ::testing::Values(
        GradCase { Head::kRegression, LayerOrder::kReluThenNorm, true },
        GradCase { Head::kClassification, LayerOrder::kReluThenNorm, true },
        GradCase { Head::kRegression, LayerOrder::kNormThenRelu, true },
        GradCase { Head::kClassification, LayerOrder::kNormThenRelu, true },
        GradCase { Head::kRegression, LayerOrder::kReluThenNorm, false },
        GradCase { Head::kClassification, LayerOrder::kReluThenNorm, false }));

TEST(MLPInitTest, Determinism) {
  const auto a = MLPModel::init({ 10, 8, 4, 1 }, {}, 7);
  const auto b = MLPModel::init({ 10, 8, 4, 1 }, {}, 7);
  const auto c = MLPModel::init({ 10, 8, 4, 1 }, {}, 8);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_NE(a.layers()[0].weight, c.layers()[0].weight);
}

TEST(MLPInitTest, Shapes) {
  const auto m = MLPModel::init(default_dims(), {}, 1);
  ASSERT_EQ(m.layers().size(), 7);
  EXPECT_EQ(m.layers()[0].weight.rows(), 1024);
  EXPECT_EQ(m.layers()[0].weight.cols(), 2394);
  EXPECT_EQ(m.layers()[0].gamma.size(), 1024);
  EXPECT_EQ(m.layers().back().gamma.size(), 0);
  EXPECT_EQ(m.input_width(), 2394);
}

TEST(MLPInitTest, BadDims) {
  EXPECT_THROW(MLPModel::init({ 3, 0, 1 }, {}, 1), BadDims);
  EXPECT_THROW(MLPModel::init({ 3 }, {}, 1), BadDims);
  EXPECT_THROW(MLPModel::init({ 3, 2, 2 }, {}, 1), BadDims);
}

MLPModel zero_model(Head head) {
  ModelOptions opts;
  opts.head = head;
  MLPModel m = MLPModel::init({ 5, 4, 3, 1 }, opts, 3);
  for (DenseLayer &layer: m.layers()) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
  return m;
}

TEST(ForwardTest, ZeroModel) {
  Rng rng(5);
  const Eigen::MatrixXd x = random_matrix(7, 5, rng);
  const auto reg = forward(zero_model(Head::kRegression), x, Mode::kEval);
  const auto cls = forward(zero_model(Head::kClassification), x, Mode::kEval);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    EXPECT_EQ(reg[i], 0.0);
    EXPECT_EQ(cls[i], 0.5);
  }
  const auto labels = predict_class(zero_model(Head::kClassification), to_features(x));
  for (SolventClass c: labels)
    EXPECT_EQ(c, SolventClass::kNonSolvent);
}

TEST(ForwardTest, EvalIsDeterministicAndBounded) {
  ModelOptions opts;
  opts.head = Head::kClassification;
  const auto m = MLPModel::init({ 6, 5, 1 }, opts, 9);
  Rng rng(1);
  const Eigen::MatrixXd x = random_matrix(20, 6, rng) * 10;
  const auto a = forward(m, x, Mode::kEval);
  const auto b = forward(m, x, Mode::kEval);
  EXPECT_EQ(a, b);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    EXPECT_GT(a[i], 0.0);
    EXPECT_LT(a[i], 1.0);
  }
}

TEST(ForwardTest, TrainModeNeedsTwoRows) {
  const auto m = MLPModel::init({ 3, 2, 1 }, {}, 1);
  Rng rng(1);
  EXPECT_THROW(forward(m, Eigen::MatrixXd::Ones(1, 3), Mode::kTrain, 0.0, &rng),
               TrainBatchTooSmall);
  EXPECT_THROW(forward(m, Eigen::MatrixXd(0, 3), Mode::kEval), EmptyBatch);
  EXPECT_THROW(forward(m, Eigen::MatrixXd::Ones(2, 4), Mode::kEval), ShapeMismatch);
}

TEST(ForwardTest, RunningStatisticsUpdate) {
  MLPModel m = MLPModel::init({ 3, 2, 1 }, {}, 1);
  Rng rng(2);
  const Eigen::MatrixXd x = random_matrix(8, 3, rng) + Eigen::MatrixXd::Constant(8, 3, 2.0);
  MLPModel stats = m;
  forward(m, x, Mode::kTrain, 0.0, &rng, &stats, 0.1);
  EXPECT_NE(stats.layers()[0].running_mean, m.layers()[0].running_mean);
  EXPECT_EQ(stats.layers()[0].weight, m.layers()[0].weight);
}

TEST(LossTest, HandValues) {
  const std::vector<double> a { 1, 2 }, zero { 0, 0 }, one { 1, 1 };
  EXPECT_EQ(mse_loss(a, a), 0.0);
  EXPECT_EQ(mse_loss(zero, one), 1.0);
  const std::vector<double> half { 0.5, 0.5 }, labels { 0, 1 };
  EXPECT_NEAR(bce_loss(half, labels), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_loss(half, labels), 0.6931, 1e-4);
  const std::vector<double> certain { 0.0, 1.0 }, wrong { 1, 0 };
  EXPECT_TRUE(std::isfinite(bce_loss(certain, wrong)));
  EXPECT_THROW(mse_loss({}, {}), EmptyBatch);
}

TEST(BackwardTest, ZeroErrorBatchGivesZeroOutputGradient) {
  const auto m = MLPModel::init({ 10, 8, 4, 1 }, {}, 4);
  Rng rng(4);
  const Eigen::MatrixXd x = random_matrix(6, 10, rng);
  const Eigen::VectorXd pred = forward(m, x, Mode::kTrain, 0.0, &rng);
  const std::vector<double> targets(pred.data(), pred.data() + pred.size());
  Gradients g = Gradients::zeros_like(m);
  compute_gradients(m, x, targets, 0.0, rng, g);
  EXPECT_LE(g.layers.back().weight.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(std::abs(g.layers.back().bias[0]), 1e-14);
}

TEST(BackwardTest, Deterministic) {
  const auto m = MLPModel::init({ 10, 8, 4, 1 }, {}, 4);
  Rng data(4);
  const Eigen::MatrixXd x = random_matrix(6, 10, data);
  const std::vector<double> y { 1, -1, 0.5, 2, 0, -0.3 };
  Gradients a = Gradients::zeros_like(m), b = Gradients::zeros_like(m);
  Rng ra(11), rb(11);
  compute_gradients(m, x, y, 0.2, ra, a);
  compute_gradients(m, x, y, 0.2, rb, b);
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    EXPECT_EQ(a.layers[l].weight, b.layers[l].weight);
    EXPECT_EQ(a.layers[l].gamma, b.layers[l].gamma);
  }
}

TEST(BatchNormTest, NormalizedMoments) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.below(60));
    Eigen::MatrixXd x = random_matrix(rows, 7, rng);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      x.col(j) = x.col(j) * (10 + 40 * rng.uniform()) + Eigen::VectorXd::Constant(rows, rng.normal() * 5);
    const BatchNormStats s = batch_norm_normalize(x, 1e-5);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double mean = s.xhat.col(j).mean();
      const double var = (s.xhat.col(j).array() - mean).square().mean();
      EXPECT_NEAR(mean, 0.0, 1e-6);
      EXPECT_NEAR(var, 1.0, 1e-6);
    }
  }
}

TEST(DropoutTest, MaskExpectation) {
  Rng rng(31);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(1, 16);
  constexpr int kMasks = 10000;
  for (int k = 0; k < kMasks; ++k) {
    const Eigen::MatrixXd mask = dropout_mask(1, 16, 0.2, rng);
    for (Eigen::Index j = 0; j < mask.cols(); ++j)
      EXPECT_TRUE(mask(0, j) == 0.0 || mask(0, j) == 1.0 / 0.8);
    sum += mask;
  }
  for (Eigen::Index j = 0; j < sum.cols(); ++j)
    EXPECT_NEAR(sum(0, j) / kMasks, 1.0, 0.02);
}

// Without batch norm the output is linear in the dropped activations, so
// its mean over masks equals the eval-mode output.
TEST(DropoutTest, ForwardExpectationMatchesEval) {
  ModelOptions opts;
  opts.batch_norm = false;
  const auto m = MLPModel::init({ 4, 12, 1 }, opts, 6);
  Rng rng(6);
  const Eigen::MatrixXd x = random_matrix(3, 4, rng).cwiseAbs() + Eigen::MatrixXd::Ones(3, 4);
  const Eigen::VectorXd eval = forward(m, x, Mode::kEval);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
  constexpr int kMasks = 10000;
  for (int k = 0; k < kMasks; ++k)
    sum += forward(m, x, Mode::kTrain, 0.2, &rng);
  for (Eigen::Index i = 0; i < 3; ++i)
    EXPECT_NEAR(sum[i] / kMasks, eval[i], 0.02 * std::abs(eval[i]));
}

MLPModel scalar_model() {
  ModelOptions opts;
  opts.batch_norm = false;
  return MLPModel::init({ 1, 1 }, opts, 1);
}

TEST(AdamTest, FirstStepIsSignedLearningRate) {
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.weight_decay = 0;
  for (double g: { 0.37, -2.5, 1e-3 }) {
    MLPModel m = scalar_model();
    const double w0 = m.layers()[0].weight(0, 0);
    Gradients grads = Gradients::zeros_like(m);
    grads.layers[0].weight(0, 0) = g;
    AdamOptimizer opt(m, cfg);
    opt.step(m, grads);
    const double expected = -cfg.learning_rate * g / (std::abs(g) + cfg.adam_eps);
    EXPECT_NEAR(m.layers()[0].weight(0, 0) - w0, expected, 1e-15);
    EXPECT_NEAR(m.layers()[0].weight(0, 0) - w0,
                -cfg.learning_rate * (g > 0 ? 1 : -1), 1e-7);
    EXPECT_EQ(m.layers()[0].bias[0], 0.0);
    EXPECT_EQ(opt.steps(), 1);
  }
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  TrainConfig cfg;
  cfg.weight_decay = 0;
  MLPModel m = MLPModel::init({ 4, 3, 1 }, {}, 2);
  const MLPModel before = m;
  Gradients grads = Gradients::zeros_like(m);
  AdamOptimizer opt(m, cfg);
  for (int i = 0; i < 3; ++i)
    opt.step(m, grads);
  EXPECT_TRUE(m == before);
}

TEST(AdamTest, CoupledWeightDecay) {
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.weight_decay = 0.5;
  MLPModel m = scalar_model();
  const double w0 = m.layers()[0].weight(0, 0);
  Gradients grads = Gradients::zeros_like(m);
  AdamOptimizer opt(m, cfg);
  opt.step(m, grads);
  // Effective gradient is lambda * w; the bias sees no decay.
  const double g = cfg.weight_decay * w0;
  EXPECT_NEAR(m.layers()[0].weight(0, 0) - w0,
              -cfg.learning_rate * g / (std::abs(g) + cfg.adam_eps), 1e-15);
  EXPECT_EQ(m.layers()[0].bias[0], 0.0);
}

TEST(AdamTest, IdenticalOptimizersAgree) {
  TrainConfig cfg;
  MLPModel a = MLPModel::init({ 5, 4, 1 }, {}, 3);
  MLPModel b = a;
  Rng rng(3);
  AdamOptimizer oa(a, cfg), ob(b, cfg);
  for (int s = 0; s < 4; ++s) {
    Gradients g = Gradients::zeros_like(a);
    for (auto &p: parameters(g)) {
      for (std::size_t k = 0; k < p.size; ++k)
        p.data[k] = rng.normal();
    }
    Gradients g2 = g;
    oa.step(a, g);
    ob.step(b, g2);
  }
  EXPECT_TRUE(a == b);
}

Eigen::MatrixXd to_eigen(const FeatureMatrix &x) {
  Eigen::MatrixXd m(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j)
      m(i, j) = x(i, j);
  }
  return m;
}

TEST(TrainTest, OverfitsSixtyFourSamples) {
  EXPECT_LE(testing::overfit_mse(), 1e-3);
}

TEST(TrainTest, PatienceOneStopsAtFirstStall) {
  const Task task = synthetic_task(40, 6, 5);
  std::vector<double> flipped(task.y.size());
  std::transform(task.y.begin(), task.y.end(), flipped.begin(),
                 [](double v) { return -v; });
  TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.dropout = 0;
  cfg.patience = 1;
  cfg.max_epochs = 100;
  cfg.seed = 5;
  const auto init = MLPModel::init({ 6, 16, 8, 1 }, {}, 5);
  const auto result = train(init, task.x, task.y, task.x, flipped, cfg);
  const auto &val = result.history.val_loss;
  const int best = result.history.best_epoch;
  ASSERT_EQ(result.history.stop_reason, TrainHistory::StopReason::kPatience);
  ASSERT_EQ(val.size(), static_cast<std::size_t>(best) + 1);
  for (std::size_t e = 1; e + 1 < val.size(); ++e)
    EXPECT_LT(val[e], val[e - 1]);
  EXPECT_GE(val.back(), val[best - 1]);

  TrainConfig truncated = cfg;
  truncated.max_epochs = best;
  const auto ref = train(init, task.x, task.y, task.x, flipped, truncated);
  EXPECT_TRUE(result.model == ref.model);
}

TEST(TrainTest, BestSnapshotReproducesBestLoss) {
  const Task tr = synthetic_task(96, 8, 6);
  const Task va = synthetic_task(30, 8, 7);
  TrainConfig cfg;
  cfg.learning_rate = 3e-3;
  cfg.max_epochs = 60;
  cfg.patience = 10;
  cfg.seed = 6;
  const auto result = train(MLPModel::init({ 8, 32, 16, 1 }, {}, 6), tr.x, tr.y,
                            va.x, va.y, cfg);
  const auto &h = result.history;
  EXPECT_EQ(h.best_val_loss, *std::min_element(h.val_loss.begin(), h.val_loss.end()));
  EXPECT_EQ(h.best_val_loss, h.val_loss[h.best_epoch - 1]);
  EXPECT_NEAR(batch_loss(result.model, to_eigen(va.x), va.y, Mode::kEval),
              h.best_val_loss, 1e-10);
}

TEST(TrainTest, FixedSeedIsReproducible) {
  const Task tr = synthetic_task(50, 5, 8);
  const Task va = synthetic_task(20, 5, 9);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.max_epochs = 15;
  cfg.seed = 8;
  const auto init = MLPModel::init({ 5, 12, 6, 1 }, {}, 8);
  const auto a = train(init, tr.x, tr.y, va.x, va.y, cfg);
  const auto b = train(init, tr.x, tr.y, va.x, va.y, cfg);
  EXPECT_EQ(a.history.train_loss, b.history.train_loss);
  EXPECT_EQ(a.history.val_loss, b.history.val_loss);
  EXPECT_TRUE(a.model == b.model);
}

double weight_norm(const MLPModel &m) {
  double s = 0;
  for (const DenseLayer &layer: m.layers())
    s += layer.weight.squaredNorm();
  return std::sqrt(s);
}

TEST(TrainTest, WeightDecayShrinksWeights) {
  const Task tr = synthetic_task(64, 6, 10);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.max_epochs = 40;
  cfg.patience = 40;
  cfg.dropout = 0;
  cfg.seed = 10;
  const auto init = MLPModel::init({ 6, 16, 8, 1 }, {}, 10);
  cfg.weight_decay = 0;
  const auto plain = train(init, tr.x, tr.y, tr.x, tr.y, cfg);
  cfg.weight_decay = 0.5;
  const auto decayed = train(init, tr.x, tr.y, tr.x, tr.y, cfg);
  EXPECT_LT(weight_norm(decayed.model), weight_norm(plain.model));
}

TEST(TrainTest, LoneTrailingRowIsFolded) {
  const Task tr = synthetic_task(33, 4, 12);
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.batch_size = 32;
  EXPECT_NO_THROW(train(MLPModel::init({ 4, 4, 1 }, {}, 1), tr.x, tr.y, tr.x,
                        tr.y, cfg));
}

TEST(TrainTest, NonFiniteInputThrows) {
  Task tr = synthetic_task(20, 4, 13);
  tr.x.values[5] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.max_epochs = 2;
  EXPECT_THROW(train(MLPModel::init({ 4, 4, 1 }, {}, 1), tr.x, tr.y, tr.x, tr.y, cfg),
               NumericError);
}

TEST(TrainConfigTest, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dropout = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.learning_rate = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(PredictTest, ZeroOutputGivesStandardizerMean) {
  MLPModel m = zero_model(Head::kRegression);
  m.standardizer = TargetStandardizer(3.0, 2.0);
  Rng rng(1);
  const auto wt = predict_wt(m, to_features(random_matrix(9, 5, rng)));
  for (double v: wt)
    EXPECT_EQ(v, 3.0);
}

TEST(PredictTest, HandBuiltTwoLayerModel) {
  ModelOptions opts;
  opts.batch_norm = false;
  MLPModel m = MLPModel::init({ 2, 2, 1 }, opts, 1);
  m.layers()[0].weight << 1.0, -2.0, 0.5, 0.25;
  m.layers()[0].bias << 0.5, -1.0;
  m.layers()[1].weight << 3.0, -1.5;
  m.layers()[1].bias << 0.25;
  m.standardizer = TargetStandardizer(10.0, 4.0);
  FeatureMatrix x(2, 2);
  x.values = { 1.0, 0.25, 4.0, 2.0 };
  // Row 0: h = relu(1 - 0.5 + 0.5, 0.5 + 0.0625 - 1) = (1, 0); z = 3.25.
  // Row 1: h = relu(4 - 4 + 0.5, 2 + 0.5 - 1) = (0.5, 1.5); z = -0.5.
  const auto wt = predict_wt(m, x);
  ASSERT_EQ(wt.size(), 2);
  EXPECT_DOUBLE_EQ(wt[0], 3.25 * 4.0 + 10.0);
  EXPECT_DOUBLE_EQ(wt[1], -0.5 * 4.0 + 10.0);
  EXPECT_EQ(predict_wt(m, x), wt);
}

TEST(PredictTest, ProbabilityThreshold) {
  MLPModel m = zero_model(Head::kClassification);
  FeatureMatrix x(1, 5);
  m.layers().back().bias[0] = std::log(0.7 / 0.3);
  EXPECT_NEAR(predict_probability(m, x)[0], 0.7, 1e-12);
  EXPECT_EQ(predict_class(m, x)[0], SolventClass::kGoodSolvent);
  m.layers().back().bias[0] = 0.0;
  EXPECT_EQ(predict_probability(m, x)[0], 0.5);
  EXPECT_EQ(predict_class(m, x)[0], SolventClass::kNonSolvent);
}

TEST(PredictTest, IncompatibleInputs) {
  MLPModel m = zero_model(Head::kRegression);
  m.standardizer = TargetStandardizer(0, 1);
  EXPECT_THROW(predict_raw(m, FeatureMatrix(2, 4)), ShapeMismatch);
  FeatureMatrix other(2, 5);
  other.layout_version = kLayoutVersion + 1;
  EXPECT_THROW(predict_raw(m, other), LayoutMismatch);
  EXPECT_THROW(predict_probability(m, FeatureMatrix(2, 5)), LayoutMismatch);
  EXPECT_THROW(predict_wt(zero_model(Head::kClassification), FeatureMatrix(2, 5)),
               LayoutMismatch);
}
}  // namespace
}  // namespace solvo
