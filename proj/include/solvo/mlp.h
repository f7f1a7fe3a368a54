//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_MLP_H_
#define SOLVO_MLP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solvo/features.h"
#include "solvo/metrics.h"
#include "solvo/random.h"

namespace solvo {
enum class Head : std::uint8_t { kRegression = 0, kClassification = 1 };

// Where batch normalization sits in a hidden block. Both variants end with
// dropout.
enum class LayerOrder : std::uint8_t {
  kReluThenNorm = 0,  // linear, ReLU, batch norm
  kNormThenRelu = 1,  // linear, batch norm, ReLU
};

enum class Mode { kTrain, kEval };

// 2394 -> 1024 -> 512 -> 256 -> 128 -> 64 -> 32 -> 1
std::vector<int> default_dims();

struct ModelOptions {
  Head head = Head::kRegression;
  LayerOrder order = LayerOrder::kReluThenNorm;
  bool batch_norm = true;
  double bn_eps = 1e-5;
};

// weight is out x in. The batch-norm vectors are empty for the output
// layer and when batch norm is disabled.
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
  Eigen::VectorXd gamma;
  Eigen::VectorXd beta;
  Eigen::VectorXd running_mean;
  Eigen::VectorXd running_var;
};

class ModelError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BadDims: public ModelError {
public:
  using ModelError::ModelError;
};

class ShapeMismatch: public ModelError {
public:
  using ModelError::ModelError;
};

class TrainBatchTooSmall: public ModelError {
public:
  using ModelError::ModelError;
};

class EmptyBatch: public ModelError {
public:
  using ModelError::ModelError;
};

class EmptyDataset: public ModelError {
public:
  using ModelError::ModelError;
};

class NumericError: public ModelError {
public:
  using ModelError::ModelError;
};

// Feature layout or head does not match what the model was built for.
class LayoutMismatch: public ModelError {
public:
  using ModelError::ModelError;
};

class MLPModel {
public:
  MLPModel() = default;

  // He-normal weights (std sqrt(2 / fan_in)), zero biases, gamma 1,
  // beta 0, running statistics (0, 1). Throws BadDims.
  static MLPModel init(std::vector<int> dims, ModelOptions options,
                       std::uint64_t seed);

  const std::vector<int> &dims() const { return dims_; }
  const ModelOptions &options() const { return options_; }
  Head head() const { return options_.head; }
  std::size_t input_width() const { return static_cast<std::size_t>(dims_.front()); }

  std::vector<DenseLayer> &layers() { return layers_; }
  const std::vector<DenseLayer> &layers() const { return layers_; }

  std::uint32_t layout_version = kLayoutVersion;
  // Regression only; maps raw outputs back to wt%.
  std::optional<TargetStandardizer> standardizer;
  // Applied to raw features before the first layer when present.
  std::optional<FeatureScaler> input_scaler;

  friend bool operator==(const MLPModel &a, const MLPModel &b);

private:
  friend class ModelReader;

  std::vector<int> dims_;
  ModelOptions options_;
  std::vector<DenseLayer> layers_;
};

// Same shapes as the model's trainable parameters.
struct Gradients {
  std::vector<DenseLayer> layers;

  static Gradients zeros_like(const MLPModel &model);
};

// A flat view of one trainable array, in the fixed order
// (weight, bias, gamma, beta) per layer.
struct ParameterRef {
  std::string name;
  double *data;
  std::size_t size;
  bool decayed;  // weights only; biases and batch-norm affine terms exempt
};

std::vector<ParameterRef> parameters(MLPModel &model);
std::vector<ParameterRef> parameters(Gradients &grads);

struct TrainConfig {
  double learning_rate = 1e-4;
  double weight_decay = 1e-5;
  std::size_t batch_size = 32;
  double dropout = 0.2;
  int patience = 50;
  int max_epochs = 1000;
  std::uint64_t seed = 0;
  double bn_momentum = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  // false: L2 term added to the gradient; true: decoupled decay.
  bool decoupled_weight_decay = false;

  void validate() const;
};

// Mean squared error and binary cross-entropy with p clamped to
// [1e-12, 1 - 1e-12]. Throw EmptyBatch.
double mse_loss(std::span<const double> pred, std::span<const double> target);
double bce_loss(std::span<const double> prob, std::span<const double> target);

// Raw network outputs for a batch: standardized values for regression,
// probabilities for classification. Train mode uses batch statistics and
// draws dropout masks from rng; when stats is non-null the running
// statistics in *stats are updated (stats may alias the model).
Eigen::VectorXd forward(const MLPModel &model, const Eigen::MatrixXd &x,
                        Mode mode, double dropout = 0.0, Rng *rng = nullptr,
                        MLPModel *stats = nullptr, double bn_momentum = 0.1);

// Train-mode forward and exact backward on one batch; returns the loss
// (MSE or BCE by head) and fills grads.
double compute_gradients(const MLPModel &model, const Eigen::MatrixXd &x,
                         std::span<const double> targets, double dropout,
                         Rng &rng, Gradients &grads);

// Loss of a batch without touching any state.
double batch_loss(const MLPModel &model, const Eigen::MatrixXd &x,
                  std::span<const double> targets, Mode mode,
                  double dropout = 0.0, Rng *rng = nullptr);

class AdamOptimizer {
public:
  AdamOptimizer(const MLPModel &model, const TrainConfig &config);

  // One bias-corrected update; the step counter starts at 1.
  void step(MLPModel &model, Gradients &grads);
  long steps() const { return t_; }

private:
  TrainConfig config_;
  Gradients m_;
  Gradients v_;
  long t_ = 0;
};

struct TrainHistory {
  enum class StopReason { kPatience, kMaxEpochs };

  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int best_epoch = 0;  // 1-based
  double best_val_loss = 0;
  StopReason stop_reason = StopReason::kMaxEpochs;
};

struct TrainResult {
  MLPModel model;
  TrainHistory history;
};

using EpochCallback =
    std::function<void(int epoch, double train_loss, double val_loss)>;

// Mini-batch training with early stopping on the validation loss. Targets
// are standardized wt% for regression and 0/1 labels for classification.
// Returns the snapshot from the best validation epoch.
TrainResult train(MLPModel model, const FeatureMatrix &x_train,
                  std::span<const double> y_train, const FeatureMatrix &x_val,
                  std::span<const double> y_val, const TrainConfig &config,
                  const EpochCallback &on_epoch = {});

// Eval-mode outputs over a feature matrix. Throws LayoutMismatch when the
// layout version differs and ShapeMismatch on a width mismatch.
std::vector<double> predict_raw(const MLPModel &model, const FeatureMatrix &x);
// Regression head only.
std::vector<double> predict_wt(const MLPModel &model, const FeatureMatrix &x);
// Classification head only.
std::vector<double> predict_probability(const MLPModel &model,
                                        const FeatureMatrix &x);
std::vector<SolventClass> predict_class(const MLPModel &model,
                                        const FeatureMatrix &x);

// Building blocks, exposed for property tests.
struct BatchNormStats {
  Eigen::MatrixXd xhat;
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd var;  // biased (divide by batch size)
};
BatchNormStats batch_norm_normalize(const Eigen::MatrixXd &x, double eps);

// Inverted dropout mask: entries 0 or 1 / (1 - rate).
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols,
                             double rate, Rng &rng);
}  // namespace solvo

#endif  // SOLVO_MLP_H_
