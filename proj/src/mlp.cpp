//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SparseCore>
#include <spdlog/spdlog.h>

namespace solvo {
namespace {
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kProbClamp = 1e-12;
constexpr std::size_t kPredictChunk = 1024;

struct HiddenCache {
  Eigen::MatrixXd input;  // empty for the first layer, which reads x
  Eigen::MatrixXd xhat;
  Eigen::RowVectorXd inv_std;
  Eigen::MatrixXd relu_gate;
  Eigen::MatrixXd drop;
};

struct ForwardCache {
  std::vector<HiddenCache> hidden;
  Eigen::MatrixXd last_input;
};

double sigmoid(double z) {
  if (z >= 0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// x * w^T, reading one contiguous weight column per nonzero input.
Eigen::MatrixXd sparse_times_wt(const SparseRows &x, const Eigen::MatrixXd &w) {
  Eigen::MatrixXd zt = Eigen::MatrixXd::Zero(w.rows(), x.rows());
  for (Eigen::Index b = 0; b < x.rows(); ++b) {
    for (SparseRows::InnerIterator it(x, b); it; ++it)
      zt.col(b).noalias() += it.value() * w.col(it.col());
  }
  return zt.transpose();
}

// d^T * x, the weight gradient of a layer fed by x.
Eigen::MatrixXd dt_times_sparse(const Eigen::MatrixXd &d, const SparseRows &x) {
  const Eigen::MatrixXd dt = d.transpose();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d.cols(), x.cols());
  for (Eigen::Index b = 0; b < x.rows(); ++b) {
    for (SparseRows::InnerIterator it(x, b); it; ++it)
      g.col(it.col()).noalias() += it.value() * dt.col(b);
  }
  return g;
}

Eigen::MatrixXd linear(const DenseLayer &layer, const SparseRows &x,
                       const Eigen::MatrixXd &a, bool first) {
  Eigen::MatrixXd z = first ? sparse_times_wt(x, layer.weight)
                            : Eigen::MatrixXd(a * layer.weight.transpose());
  z.rowwise() += layer.bias.transpose();
  return z;
}

// Output-layer pre-activations, one per row.
Eigen::VectorXd run(const MLPModel &model, const SparseRows &x, Mode mode,
                    double dropout, Rng *rng, MLPModel *stats,
                    double momentum, ForwardCache *cache) {
  const auto &layers = model.layers();
  const ModelOptions &opt = model.options();
  const Eigen::Index batch = x.rows();
  if (batch == 0)
    throw EmptyBatch("empty batch");
  if (x.cols() != model.dims().front())
    throw ShapeMismatch("input has " + std::to_string(x.cols())
                        + " columns, model expects "
                        + std::to_string(model.dims().front()));
  const bool train = mode == Mode::kTrain;
  if (train && opt.batch_norm && batch < 2)
    throw TrainBatchTooSmall("batch norm needs at least 2 rows per batch");
  if (train && dropout > 0 && rng == nullptr)
    throw std::invalid_argument("dropout needs a random stream");

  const std::size_t hidden = layers.size() - 1;
  if (cache)
    cache->hidden.assign(hidden, {});
  Eigen::MatrixXd a;
  for (std::size_t l = 0; l < hidden; ++l) {
    const DenseLayer &layer = layers[l];
    HiddenCache *c = cache ? &cache->hidden[l] : nullptr;
    Eigen::MatrixXd z = linear(layer, x, a, l == 0);
    if (c && l > 0)
      c->input = std::move(a);

    auto norm = [&](Eigen::MatrixXd &v) {
      if (!opt.batch_norm)
        return;
      Eigen::MatrixXd xhat;
      if (train) {
        BatchNormStats s = batch_norm_normalize(v, opt.bn_eps);
        if (stats) {
          DenseLayer &sl = stats->layers()[l];
          const double unbias = static_cast<double>(batch) / (batch - 1);
          sl.running_mean =
              (1 - momentum) * sl.running_mean + momentum * s.mean.transpose();
          sl.running_var = (1 - momentum) * sl.running_var
                         + momentum * unbias * s.var.transpose();
        }
        if (c)
          c->inv_std = (s.var.array() + opt.bn_eps).rsqrt().matrix();
        xhat = std::move(s.xhat);
      } else {
        Eigen::RowVectorXd inv =
            (layer.running_var.transpose().array() + opt.bn_eps).rsqrt();
        xhat = (v.rowwise() - layer.running_mean.transpose()).array().rowwise()
             * inv.array();
      }
      v = ((xhat.array().rowwise() * layer.gamma.transpose().array()).rowwise()
           + layer.beta.transpose().array())
              .matrix();
      if (c)
        c->xhat = std::move(xhat);
    };
    auto relu = [&](Eigen::MatrixXd &v) {
      if (c)
        c->relu_gate = (v.array() > 0).cast<double>().matrix();
      v = v.cwiseMax(0.0);
    };

    if (opt.order == LayerOrder::kReluThenNorm) {
      relu(z);
      norm(z);
    } else {
      norm(z);
      relu(z);
    }
    if (train && dropout > 0) {
      Eigen::MatrixXd mask = dropout_mask(z.rows(), z.cols(), dropout, *rng);
      z.array() *= mask.array();
      if (c)
        c->drop = std::move(mask);
    }
    a = std::move(z);
  }

  Eigen::MatrixXd out = linear(layers.back(), x, a, hidden == 0);
  if (cache)
    cache->last_input = std::move(a);
  return out.col(0);
}

// Loss of raw outputs z by head; fills dL/dz when dz is non-null.
double head_loss(const MLPModel &model, const Eigen::VectorXd &z,
                 std::span<const double> target, Eigen::VectorXd *dz) {
  const Eigen::Index n = z.size();
  if (static_cast<std::size_t>(n) != target.size())
    throw ShapeMismatch("target count does not match batch size");
  if (dz)
    dz->resize(n);
  double loss = 0;
  if (model.head() == Head::kRegression) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = z[i] - target[i];
      loss += d * d;
      if (dz)
        (*dz)[i] = 2.0 * d / n;
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(z[i]);
      const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
      loss -= target[i] * std::log(pc) + (1 - target[i]) * std::log(1 - pc);
      if (dz)
        (*dz)[i] = p > kProbClamp && p < 1.0 - kProbClamp
                     ? (p - target[i]) / n
                     : 0.0;
    }
  }
  return loss / n;
}

double gradients_sparse(const MLPModel &model, const SparseRows &x,
                        std::span<const double> targets, double dropout,
                        Rng &rng, Gradients &grads, MLPModel *stats,
                        double momentum) {
  ForwardCache cache;
  const Eigen::VectorXd z =
      run(model, x, Mode::kTrain, dropout, &rng, stats, momentum, &cache);
  Eigen::VectorXd dz;
  const double loss = head_loss(model, z, targets, &dz);

  const auto &layers = model.layers();
  const ModelOptions &opt = model.options();
  const std::size_t hidden = layers.size() - 1;
  const double batch = static_cast<double>(x.rows());
  if (grads.layers.size() != layers.size())
    grads = Gradients::zeros_like(model);

  Eigen::MatrixXd d = dz;
  DenseLayer &go = grads.layers.back();
  go.weight = hidden == 0 ? dt_times_sparse(d, x)
                          : Eigen::MatrixXd(d.transpose() * cache.last_input);
  go.bias = d.colwise().sum().transpose();
  d = d * layers.back().weight;

  for (std::size_t l = hidden; l-- > 0;) {
    const DenseLayer &layer = layers[l];
    DenseLayer &g = grads.layers[l];
    HiddenCache &c = cache.hidden[l];
    if (c.drop.size() > 0)
      d.array() *= c.drop.array();

    auto norm_back = [&](Eigen::MatrixXd &dy) {
      if (!opt.batch_norm)
        return;
      g.gamma = (dy.array() * c.xhat.array()).colwise().sum().transpose();
      g.beta = dy.colwise().sum().transpose();
      Eigen::ArrayXXd dxhat =
          dy.array().rowwise() * layer.gamma.transpose().array();
      Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
      Eigen::RowVectorXd sum_dx = (dxhat * c.xhat.array()).colwise().sum();
      Eigen::ArrayXXd t = batch * dxhat;
      t.rowwise() -= sum_d.array();
      t -= c.xhat.array().rowwise() * sum_dx.array();
      t.rowwise() *= c.inv_std.array() / batch;
      dy = t.matrix();
    };
    auto relu_back = [&](Eigen::MatrixXd &dy) {
      dy.array() *= c.relu_gate.array();
    };
    if (opt.order == LayerOrder::kReluThenNorm) {
      norm_back(d);
      relu_back(d);
    } else {
      relu_back(d);
      norm_back(d);
    }

    g.weight = l == 0 ? dt_times_sparse(d, x)
                      : Eigen::MatrixXd(d.transpose() * c.input);
    g.bias = d.colwise().sum().transpose();
    if (l > 0)
      d = d * layer.weight;
  }
  return loss;
}

SparseRows gather(const FeatureMatrix &x, std::span<const std::size_t> rows) {
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto r = x.row(rows[k]);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] != 0.0)
        entries.emplace_back(static_cast<int>(k), static_cast<int>(j), r[j]);
    }
  }
  SparseRows s(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(x.cols));
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

void check_features(const MLPModel &model, const FeatureMatrix &x) {
  if (x.layout_version != model.layout_version)
    throw LayoutMismatch("feature layout version "
                         + std::to_string(x.layout_version)
                         + " does not match model layout version "
                         + std::to_string(model.layout_version));
  if (x.cols != model.input_width())
    throw ShapeMismatch("features have " + std::to_string(x.cols)
                        + " columns, model expects "
                        + std::to_string(model.input_width()));
}

const FeatureMatrix &scaled(const MLPModel &model, const FeatureMatrix &x,
                            FeatureMatrix &storage) {
  if (!model.input_scaler)
    return x;
  storage = x;
  model.input_scaler->apply(storage);
  return storage;
}

double eval_loss(const MLPModel &model, const FeatureMatrix &x,
                 std::span<const double> y) {
  double total = 0;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < x.rows; start += kPredictChunk) {
    const std::size_t end = std::min(x.rows, start + kPredictChunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Eigen::VectorXd z =
        run(model, gather(x, idx), Mode::kEval, 0, nullptr, nullptr, 0, nullptr);
    total += head_loss(model, z, y.subspan(start, end - start), nullptr)
           * static_cast<double>(end - start);
  }
  return total / static_cast<double>(x.rows);
}

bool same(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  return a.size() == b.size() && a == b;
}

std::vector<ParameterRef> parameter_refs(std::vector<DenseLayer> &layers) {
  std::vector<ParameterRef> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    DenseLayer &layer = layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    out.push_back({ prefix + "weight", layer.weight.data(),
                    static_cast<std::size_t>(layer.weight.size()), true });
    out.push_back({ prefix + "bias", layer.bias.data(),
                    static_cast<std::size_t>(layer.bias.size()), false });
    if (layer.gamma.size() > 0) {
      out.push_back({ prefix + "gamma", layer.gamma.data(),
                      static_cast<std::size_t>(layer.gamma.size()), false });
      out.push_back({ prefix + "beta", layer.beta.data(),
                      static_cast<std::size_t>(layer.beta.size()), false });
    }
  }
  return out;
}
}  // namespace

std::vector<int> default_dims() {
  return { static_cast<int>(kPairFeatures), 1024, 512, 256, 128, 64, 32, 1 };
}

MLPModel MLPModel::init(std::vector<int> dims, ModelOptions options,
                        std::uint64_t seed) {
  if (dims.size() < 2)
    throw BadDims("need at least an input and an output width");
  for (int d: dims) {
    if (d <= 0)
      throw BadDims("layer widths must be positive");
  }
  if (dims.back() != 1)
    throw BadDims("output width must be 1");
  if (!(options.bn_eps > 0))
    throw BadDims("batch-norm epsilon must be positive");

  MLPModel m;
  m.dims_ = std::move(dims);
  m.options_ = options;
  Rng rng(seed);
  const std::size_t n_layers = m.dims_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = m.dims_[l];
    const int out = m.dims_[l + 1];
    DenseLayer layer;
    layer.weight.resize(out, in);
    const double scale = std::sqrt(2.0 / in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c)
        layer.weight(r, c) = scale * rng.normal();
    }
    layer.bias = Eigen::VectorXd::Zero(out);
    if (options.batch_norm && l + 1 < n_layers) {
      layer.gamma = Eigen::VectorXd::Ones(out);
      layer.beta = Eigen::VectorXd::Zero(out);
      layer.running_mean = Eigen::VectorXd::Zero(out);
      layer.running_var = Eigen::VectorXd::Ones(out);
    }
    m.layers_.push_back(std::move(layer));
  }
  return m;
}

bool operator==(const MLPModel &a, const MLPModel &b) {
  if (a.dims_ != b.dims_ || a.layout_version != b.layout_version
      || a.options_.head != b.options_.head
      || a.options_.order != b.options_.order
      || a.options_.batch_norm != b.options_.batch_norm
      || a.options_.bn_eps != b.options_.bn_eps
      || a.layers_.size() != b.layers_.size())
    return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const DenseLayer &x = a.layers_[l];
    const DenseLayer &y = b.layers_[l];
    if (!same(x.weight, y.weight) || !same(x.bias, y.bias)
        || !same(x.gamma, y.gamma) || !same(x.beta, y.beta)
        || !same(x.running_mean, y.running_mean)
        || !same(x.running_var, y.running_var))
      return false;
  }
  if (a.standardizer.has_value() != b.standardizer.has_value())
    return false;
  if (a.standardizer
      && (a.standardizer->mean() != b.standardizer->mean()
          || a.standardizer->std() != b.standardizer->std()))
    return false;
  if (a.input_scaler.has_value() != b.input_scaler.has_value())
    return false;
  return !a.input_scaler
      || (a.input_scaler->mean() == b.input_scaler->mean()
          && a.input_scaler->scale() == b.input_scaler->scale());
}

Gradients Gradients::zeros_like(const MLPModel &model) {
  Gradients g;
  for (const DenseLayer &layer: model.layers()) {
    DenseLayer z;
    z.weight = Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols());
    z.bias = Eigen::VectorXd::Zero(layer.bias.size());
    z.gamma = Eigen::VectorXd::Zero(layer.gamma.size());
    z.beta = Eigen::VectorXd::Zero(layer.beta.size());
    g.layers.push_back(std::move(z));
  }
  return g;
}

std::vector<ParameterRef> parameters(MLPModel &model) {
  return parameter_refs(model.layers());
}

std::vector<ParameterRef> parameters(Gradients &grads) {
  return parameter_refs(grads.layers);
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0))
    throw std::invalid_argument("learning rate must be positive");
  if (!(weight_decay >= 0))
    throw std::invalid_argument("weight decay must be non-negative");
  if (batch_size == 0)
    throw std::invalid_argument("batch size must be positive");
  if (!(dropout >= 0 && dropout < 1))
    throw std::invalid_argument("dropout must be in [0, 1)");
  if (patience < 1)
    throw std::invalid_argument("patience must be at least 1");
  if (max_epochs < 1)
    throw std::invalid_argument("max_epochs must be at least 1");
  if (!(bn_momentum > 0 && bn_momentum <= 1))
    throw std::invalid_argument("batch-norm momentum must be in (0, 1]");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && adam_eps > 0))
    throw std::invalid_argument("bad Adam hyperparameters");
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.empty())
    throw EmptyBatch("empty batch");
  if (pred.size() != target.size())
    throw ShapeMismatch("prediction and target lengths differ");
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    s += (pred[i] - target[i]) * (pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

double bce_loss(std::span<const double> prob, std::span<const double> target) {
  if (prob.empty())
    throw EmptyBatch("empty batch");
  if (prob.size() != target.size())
    throw ShapeMismatch("prediction and target lengths differ");
  double s = 0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double p = std::clamp(prob[i], kProbClamp, 1.0 - kProbClamp);
    s -= target[i] * std::log(p) + (1 - target[i]) * std::log(1 - p);
  }
  return s / static_cast<double>(prob.size());
}

Eigen::VectorXd forward(const MLPModel &model, const Eigen::MatrixXd &x,
                        Mode mode, double dropout, Rng *rng, MLPModel *stats,
                        double bn_momentum) {
  const SparseRows xs = x.sparseView();
  Eigen::VectorXd z =
      run(model, xs, mode, dropout, rng, stats, bn_momentum, nullptr);
  if (model.head() == Head::kClassification)
    z = z.unaryExpr([](double v) { return sigmoid(v); });
  return z;
}

double compute_gradients(const MLPModel &model, const Eigen::MatrixXd &x,
                         std::span<const double> targets, double dropout,
                         Rng &rng, Gradients &grads) {
  const SparseRows xs = x.sparseView();
  return gradients_sparse(model, xs, targets, dropout, rng, grads, nullptr, 0);
}

double batch_loss(const MLPModel &model, const Eigen::MatrixXd &x,
                  std::span<const double> targets, Mode mode, double dropout,
                  Rng *rng) {
  const SparseRows xs = x.sparseView();
  const Eigen::VectorXd z =
      run(model, xs, mode, dropout, rng, nullptr, 0, nullptr);
  return head_loss(model, z, targets, nullptr);
}

AdamOptimizer::AdamOptimizer(const MLPModel &model, const TrainConfig &config)
    : config_(config),
      m_(Gradients::zeros_like(model)),
      v_(Gradients::zeros_like(model)) { }

void AdamOptimizer::step(MLPModel &model, Gradients &grads) {
  ++t_;
  auto p = parameters(model);
  auto g = parameters(grads);
  auto m = parameters(m_);
  auto v = parameters(v_);
  if (p.size() != g.size() || p.size() != m.size())
    throw ShapeMismatch("gradient layout does not match the model");
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.learning_rate;
  const double wd = config_.weight_decay;
  const double decoupled = config_.decoupled_weight_decay ? lr * wd : 0.0;
  const double coupled = config_.decoupled_weight_decay ? 0.0 : wd;
  // One fused pass per array; the update is memory-bound.
  for (std::size_t k = 0; k < p.size(); ++k) {
    double *P = p[k].data;
    double *G = g[k].data;
    double *M = m[k].data;
    double *V = v[k].data;
    const double l2 = p[k].decayed ? coupled : 0.0;
    const double shrink = p[k].decayed ? decoupled : 0.0;
    for (std::size_t i = 0; i < p[k].size; ++i) {
      const double grad = G[i] + l2 * P[i];
      M[i] = b1 * M[i] + (1 - b1) * grad;
      V[i] = b2 * V[i] + (1 - b2) * grad * grad;
      P[i] -= shrink * P[i]
            + lr * (M[i] / c1) / (std::sqrt(V[i] / c2) + config_.adam_eps);
    }
  }
}

TrainResult train(MLPModel model, const FeatureMatrix &x_train,
                  std::span<const double> y_train, const FeatureMatrix &x_val,
                  std::span<const double> y_val, const TrainConfig &config,
                  const EpochCallback &on_epoch) {
  config.validate();
  if (x_train.rows == 0)
    throw EmptyDataset("training set is empty");
  if (x_val.rows == 0)
    throw EmptyDataset("validation set is empty");
  check_features(model, x_train);
  check_features(model, x_val);
  if (y_train.size() != x_train.rows || y_val.size() != x_val.rows)
    throw ShapeMismatch("target count does not match feature rows");
  const bool bn = model.options().batch_norm;
  if (bn && (config.batch_size < 2 || x_train.rows < 2))
    throw TrainBatchTooSmall(
        "batch norm needs batches and a training set of at least 2 rows");

  FeatureMatrix train_storage, val_storage;
  const FeatureMatrix &xt = scaled(model, x_train, train_storage);
  const FeatureMatrix &xv = scaled(model, x_val, val_storage);

  Rng rng(config.seed);
  AdamOptimizer adam(model, config);
  Gradients grads = Gradients::zeros_like(model);
  const std::size_t n = xt.rows;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> yb;

  TrainResult result;
  TrainHistory &h = result.history;
  std::vector<DenseLayer> best = model.layers();
  double best_loss = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0;
    for (std::size_t start = 0; start < n;) {
      std::size_t end = std::min(n, start + config.batch_size);
      // A lone trailing row cannot be batch-normalized; it joins the
      // previous batch.
      if (bn && n - end == 1)
        end = n;
      std::span<const std::size_t> idx(order.data() + start, end - start);
      yb.resize(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k)
        yb[k] = y_train[idx[k]];
      const double loss =
          gradients_sparse(model, gather(xt, idx), yb, config.dropout, rng,
                           grads, &model, config.bn_momentum);
      if (!std::isfinite(loss))
        throw NumericError("non-finite training loss in epoch "
                           + std::to_string(epoch));
      adam.step(model, grads);
      total += loss * static_cast<double>(idx.size());
      start = end;
    }
    const double train_loss = total / static_cast<double>(n);
    const double val_loss = eval_loss(model, xv, y_val);
    if (!std::isfinite(val_loss))
      throw NumericError("non-finite validation loss in epoch "
                         + std::to_string(epoch));
    h.train_loss.push_back(train_loss);
    h.val_loss.push_back(val_loss);
    spdlog::debug("epoch {}: train {:.6g} val {:.6g}", epoch, train_loss,
                  val_loss);
    if (on_epoch)
      on_epoch(epoch, train_loss, val_loss);

    if (val_loss < best_loss) {
      best_loss = val_loss;
      h.best_epoch = epoch;
      best = model.layers();
      stale = 0;
    } else if (++stale >= config.patience) {
      h.stop_reason = TrainHistory::StopReason::kPatience;
      break;
    }
  }
  h.best_val_loss = best_loss;
  model.layers() = std::move(best);
  result.model = std::move(model);
  return result;
}

std::vector<double> predict_raw(const MLPModel &model, const FeatureMatrix &x) {
  check_features(model, x);
  FeatureMatrix storage;
  const FeatureMatrix &xs = scaled(model, x, storage);
  std::vector<double> out;
  out.reserve(x.rows);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < xs.rows; start += kPredictChunk) {
    const std::size_t end = std::min(xs.rows, start + kPredictChunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Eigen::VectorXd z =
        run(model, gather(xs, idx), Mode::kEval, 0, nullptr, nullptr, 0, nullptr);
    for (double v: z)
      out.push_back(model.head() == Head::kClassification ? sigmoid(v) : v);
  }
  return out;
}

std::vector<double> predict_wt(const MLPModel &model, const FeatureMatrix &x) {
  if (model.head() != Head::kRegression)
    throw LayoutMismatch("model has a classification head");
  if (!model.standardizer)
    throw ModelError("regression model has no target standardizer");
  return model.standardizer->inverse_transform(predict_raw(model, x));
}

std::vector<double> predict_probability(const MLPModel &model,
                                        const FeatureMatrix &x) {
  if (model.head() != Head::kClassification)
    throw LayoutMismatch("model has a regression head");
  return predict_raw(model, x);
}

std::vector<SolventClass> predict_class(const MLPModel &model,
                                        const FeatureMatrix &x) {
  if (model.head() == Head::kRegression)
    return labels(predict_wt(model, x));
  std::vector<SolventClass> out;
  for (double p: predict_probability(model, x))
    out.push_back(label_from_probability(p));
  return out;
}

BatchNormStats batch_norm_normalize(const Eigen::MatrixXd &x, double eps) {
  BatchNormStats s;
  s.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - s.mean;
  s.var = centered.array().square().colwise().mean().matrix();
  Eigen::RowVectorXd inv = (s.var.array() + eps).rsqrt();
  s.xhat = (centered.array().rowwise() * inv.array()).matrix();
  return s;
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             Rng &rng) {
  Eigen::MatrixXd mask(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j)
      mask(i, j) = rng.uniform() < rate ? 0.0 : keep;
  }
  return mask;
}
}  // namespace solvo
