//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "solvo/data_files.h"
#include "solvo/dataio.h"
#include "solvo/features.h"
#include "solvo/forest.h"
#include "solvo/metrics.h"
#include "solvo/mlp.h"
#include "solvo/molecule.h"

using json = nlohmann::ordered_json;
using namespace solvo;

namespace {
enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kNumeric = 3,
  kIncompatible = 4,
};

class UsageError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string report = "table";
  std::string data_dir;
  bool verbose = false;

  bool machine() const { return report == "machine"; }
};

struct TrainFlags {
  std::string input;
  std::string output;
  std::string task = "regression";
  std::string scatter;
  double val_fraction = kDefaultValFraction;
  double threshold = kGoodSolventThreshold;
  TrainConfig config;
  std::string order = "relu-bn";
  bool no_batch_norm = false;
  bool scale_inputs = false;
  std::string hidden = "1024,512,256,128,64,32";
};

struct ForestFlags {
  std::string input;
  std::string test;
  std::string model;
  double val_fraction = kDefaultValFraction;
  ForestConfig config;
  bool no_bootstrap = false;
  int mtry = 0;
  int max_depth = -1;
};

struct PredictFlags {
  std::string model;
  std::string input;
  std::string output;
  std::string polymer;
  std::string solvent;
  double threshold = kGoodSolventThreshold;
  std::string scatter;
};

// Derived seeds keep the split, initialization and training streams apart.
std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng::stream(seed, stream).next_u64();
}

Featurizer load_featurizer(const Globals &g) {
  const std::filesystem::path dir =
      g.data_dir.empty() ? default_data_dir() : std::filesystem::path(g.data_dir);
  try {
    return Featurizer::load(dir);
  } catch (const std::exception &e) {
    throw FileError(std::string("cannot load data tables: ") + e.what());
  }
}

struct Featurized {
  FeatureMatrix x;
  std::vector<double> y;  // empty when the input has no targets
  std::vector<std::size_t> rows;  // dataset indices that survived
};

Featurized featurize(const Featurizer &f, const Dataset &ds) {
  FeatureCache cache(f);
  Featurized out;
  const bool targets = !ds.records.empty() && ds.has_targets();
  std::vector<double> row(kPairFeatures);
  std::vector<double> values;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const PairRecord &r = ds.records[i];
    try {
      cache.pair_features(r.polymer_smiles, r.solvent_smiles, row);
    } catch (const std::exception &e) {
      spdlog::warn("row {} ({} / {}): {} (row skipped)", i + 1,
                   r.polymer_smiles, r.solvent_smiles, e.what());
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    out.rows.push_back(i);
    if (targets)
      out.y.push_back(*r.wt_percent);
  }
  out.x.rows = out.rows.size();
  out.x.cols = kPairFeatures;
  out.x.values = std::move(values);
  return out;
}

// CSV or a feature file written by the featurize command.
Featurized load_input(const Globals &g, const std::string &path,
                      TargetColumn target) {
  if (path.empty())
    throw UsageError("--input is required");
  if (!std::filesystem::exists(path))
    throw FileError("no such file: " + path);
  if (is_feature_file(path)) {
    FeatureFile file = load_features(path);
    if (target == TargetColumn::kRequired && file.targets.empty())
      throw FileError(path + " has no targets");
    Featurized out;
    out.rows.resize(file.x.rows);
    for (std::size_t i = 0; i < out.rows.size(); ++i)
      out.rows[i] = i;
    out.x = std::move(file.x);
    out.y = std::move(file.targets);
    return out;
  }
  Dataset ds = load_pairs(path, target);
  Featurized out = featurize(load_featurizer(g), ds);
  if (target == TargetColumn::kRequired && out.y.size() != out.x.rows)
    throw FileError(path + " has rows without wt_percent");
  return out;
}

std::vector<double> pick(std::span<const double> v,
                         std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i: idx)
    out.push_back(v[i]);
  return out;
}

RegressionReport report_of(std::span<const double> y,
                           std::span<const double> yhat) {
  RegressionReport r;
  r.mae = mae(y, yhat);
  r.rmse = rmse(y, yhat);
  r.n = y.size();
  try {
    r.r2 = r2(y, yhat);
  } catch (const ConstantTarget &) {
    r.r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

json to_json(const RegressionReport &r) {
  json j;
  j["n"] = r.n;
  j["mae"] = r.mae;
  j["rmse"] = r.rmse;
  j["r2"] = std::isfinite(r.r2) ? json(r.r2) : json(nullptr);
  return j;
}

json to_json(const ClassificationReport &r) {
  json j;
  j["n"] = r.n();
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  j["accuracy"] = r.accuracy;
  return j;
}

void print_regression_table(const std::string &title,
                            const std::vector<std::pair<std::string, RegressionReport>> &rows) {
  std::printf("%s\n", title.c_str());
  std::printf("  %-12s %8s %12s %12s %10s\n", "set", "n", "MAE", "RMSE", "R2");
  for (const auto &[name, r]: rows) {
    std::printf("  %-12s %8zu %12.6f %12.6f %10.6f\n", name.c_str(), r.n,
                r.mae, r.rmse, r.r2);
  }
}

void print_confusion_table(const std::string &title,
                           const std::vector<std::pair<std::string, ClassificationReport>> &rows) {
  std::printf("%s\n", title.c_str());
  std::printf("  %-12s %8s %6s %6s %6s %6s %10s\n", "set", "n", "TP", "FP",
              "TN", "FN", "accuracy");
  for (const auto &[name, r]: rows) {
    std::printf("  %-12s %8zu %6zu %6zu %6zu %6zu %10.6f\n", name.c_str(),
                r.n(), r.tp, r.fp, r.tn, r.fn, r.accuracy);
  }
}

void write_scatter(const std::string &path, std::span<const double> y,
                   std::span<const double> yhat) {
  if (path.empty())
    return;
  std::ofstream out(path);
  if (!out)
    throw FileError("cannot write " + path);
  out << "actual,predicted\n";
  out.precision(17);
  for (std::size_t i = 0; i < y.size(); ++i)
    out << y[i] << ',' << yhat[i] << '\n';
}

void emit(const Globals &g, const json &doc) {
  if (g.machine())
    std::cout << doc.dump(2) << '\n';
}

std::vector<int> parse_hidden(const std::string &text) {
  std::vector<int> dims { static_cast<int>(kPairFeatures) };
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v <= 0)
        throw std::invalid_argument(item);
      dims.push_back(v);
    } catch (const std::exception &) {
      throw UsageError("bad --hidden width '" + item + "'");
    }
  }
  dims.push_back(1);
  return dims;
}

void check_fraction(double f) {
  if (!(f > 0 && f < 1))
    throw UsageError("--val-fraction must be strictly between 0 and 1");
}

void check_threshold(double t) {
  if (!(t > 0))
    throw UsageError("--threshold must be positive");
}

json config_snapshot(const Globals &g, const TrainFlags &f,
                     const std::vector<int> &dims) {
  json c;
  c["task"] = f.task;
  c["seed"] = g.seed;
  c["val_fraction"] = f.val_fraction;
  c["threshold"] = f.threshold;
  c["dims"] = dims;
  c["layer_order"] = f.order;
  c["batch_norm"] = !f.no_batch_norm;
  c["scale_inputs"] = f.scale_inputs;
  c["learning_rate"] = f.config.learning_rate;
  c["weight_decay"] = f.config.weight_decay;
  c["batch_size"] = f.config.batch_size;
  c["dropout"] = f.config.dropout;
  c["patience"] = f.config.patience;
  c["max_epochs"] = f.config.max_epochs;
  c["bn_momentum"] = f.config.bn_momentum;
  c["decoupled_weight_decay"] = f.config.decoupled_weight_decay;
  return c;
}

int cmd_featurize(const Globals &g, const std::string &input,
                  const std::string &output) {
  if (output.empty())
    throw UsageError("--output is required");
  Dataset ds = load_pairs(input, TargetColumn::kOptional);
  Featurized f = featurize(load_featurizer(g), ds);
  const bool targets = f.y.size() == f.x.rows && f.x.rows > 0;
  save_features(output, f.x, targets ? std::span<const double>(f.y)
                                     : std::span<const double>());
  const std::size_t skipped = ds.rows_read - f.x.rows;
  json doc;
  doc["command"] = "featurize";
  doc["rows"] = f.x.rows;
  doc["columns"] = f.x.cols;
  doc["layout_version"] = f.x.layout_version;
  doc["skipped"] = skipped;
  doc["targets"] = targets;
  doc["output"] = output;
  emit(g, doc);
  if (!g.machine())
    std::printf("wrote %zu x %zu features to %s (%zu rows skipped)\n", f.x.rows,
                f.x.cols, output.c_str(), skipped);
  return kOk;
}

int cmd_train(const Globals &g, TrainFlags f) {
  check_fraction(f.val_fraction);
  check_threshold(f.threshold);
  if (f.output.empty())
    throw UsageError("--output is required");
  if (f.task != "regression" && f.task != "classification")
    throw UsageError("--task must be regression or classification");
  if (f.order != "relu-bn" && f.order != "bn-relu")
    throw UsageError("--layer-order must be relu-bn or bn-relu");
  try {
    f.config.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const std::vector<int> dims = parse_hidden(f.hidden);
  const bool classify = f.task == "classification";

  Featurized data = load_input(g, f.input, TargetColumn::kRequired);
  const Split split = split_indices(data.x.rows, f.val_fraction, g.seed);
  const FeatureMatrix x_train = data.x.select(split.train);
  const FeatureMatrix x_val = data.x.select(split.validation);
  const std::vector<double> wt_train = pick(data.y, split.train);
  const std::vector<double> wt_val = pick(data.y, split.validation);

  ModelOptions opt;
  opt.head = classify ? Head::kClassification : Head::kRegression;
  opt.order = f.order == "relu-bn" ? LayerOrder::kReluThenNorm
                                   : LayerOrder::kNormThenRelu;
  opt.batch_norm = !f.no_batch_norm;
  MLPModel model = MLPModel::init(dims, opt, derive(g.seed, 1));
  if (f.scale_inputs)
    model.input_scaler = FeatureScaler::fit(x_train);

  std::vector<double> t_train, t_val;
  auto as_labels = [&](std::span<const double> wt) {
    std::vector<double> t;
    for (SolventClass c: labels(wt, f.threshold))
      t.push_back(c == SolventClass::kGoodSolvent ? 1.0 : 0.0);
    return t;
  };
  if (classify) {
    t_train = as_labels(wt_train);
    t_val = as_labels(wt_val);
  } else {
    model.standardizer = TargetStandardizer::fit(wt_train);
    t_train = model.standardizer->transform(wt_train);
    t_val = model.standardizer->transform(wt_val);
  }

  TrainConfig config = f.config;
  config.seed = derive(g.seed, 2);
  spdlog::info("training on {} rows, validating on {}", x_train.rows, x_val.rows);
  TrainResult result = train(std::move(model), x_train, t_train, x_val, t_val,
                             config, [](int epoch, double tl, double vl) {
                               if (epoch % 10 == 0)
                                 spdlog::info("epoch {}: train loss {:.6g}, "
                                              "val loss {:.6g}",
                                              epoch, tl, vl);
                             });
  const json snapshot = config_snapshot(g, f, dims);
  save_model(f.output, result.model, snapshot.dump());

  json doc;
  doc["command"] = "train";
  doc["task"] = f.task;
  doc["model"] = f.output;
  doc["epochs_run"] = result.history.val_loss.size();
  doc["best_epoch"] = result.history.best_epoch;
  doc["best_val_loss"] = result.history.best_val_loss;
  doc["stopped_early"] =
      result.history.stop_reason == TrainHistory::StopReason::kPatience;

  const MLPModel &m = result.model;
  std::vector<double> wt_all = wt_train;
  wt_all.insert(wt_all.end(), wt_val.begin(), wt_val.end());
  if (classify) {
    auto truth = [&](std::span<const double> wt) { return labels(wt, f.threshold); };
    const auto p_train = predict_class(m, x_train);
    const auto p_val = predict_class(m, x_val);
    std::vector<SolventClass> p_all = p_train;
    p_all.insert(p_all.end(), p_val.begin(), p_val.end());
    const auto r_train = confusion(truth(wt_train), p_train);
    const auto r_val = confusion(truth(wt_val), p_val);
    const auto r_all = confusion(truth(wt_all), p_all);
    doc["train"] = to_json(r_train);
    doc["validation"] = to_json(r_val);
    doc["combined"] = to_json(r_all);
    emit(g, doc);
    if (!g.machine()) {
      print_confusion_table("classification (good solvent: wt% > threshold)",
                            { { "train", r_train },
                              { "validation", r_val },
                              { "combined", r_all } });
    }
  } else {
    const auto y_train = predict_wt(m, x_train);
    const auto y_val = predict_wt(m, x_val);
    std::vector<double> y_all = y_train;
    y_all.insert(y_all.end(), y_val.begin(), y_val.end());
    const auto r_train = report_of(wt_train, y_train);
    const auto r_val = report_of(wt_val, y_val);
    const auto r_all = report_of(wt_all, y_all);
    write_scatter(f.scatter, wt_val, y_val);
    doc["train"] = to_json(r_train);
    doc["validation"] = to_json(r_val);
    doc["combined"] = to_json(r_all);
    emit(g, doc);
    if (!g.machine()) {
      print_regression_table("network regression (wt%)",
                             { { "train", r_train },
                               { "validation", r_val },
                               { "combined", r_all } });
    }
  }
  if (!g.machine())
    std::printf("best epoch %d of %zu; model written to %s\n",
                result.history.best_epoch, result.history.val_loss.size(),
                f.output.c_str());
  return kOk;
}

LoadedModel open_model(const std::string &path) {
  if (path.empty())
    throw UsageError("--model is required");
  return load_model(path);
}

int cmd_predict(const Globals &g, const PredictFlags &f) {
  LoadedModel lm = open_model(f.model);
  const bool single = !f.polymer.empty() || !f.solvent.empty();
  if (single && (f.polymer.empty() || f.solvent.empty()))
    throw UsageError("--polymer and --solvent must be given together");
  if (single == !f.input.empty())
    throw UsageError("give either --input or --polymer/--solvent");

  Dataset ds;
  if (single) {
    for (const std::string &s: { f.polymer, f.solvent })
      parse_smiles(s);
    ds.records.push_back({ f.polymer, f.solvent, {}, {}, {} });
    ds.rows_read = 1;
  } else {
    ds = load_pairs(f.input, TargetColumn::kOptional);
  }
  Featurized data = featurize(load_featurizer(g), ds);
  if (single && data.x.rows == 0)
    throw FileError("pair could not be featurized");
  const bool regression = lm.model.head() == Head::kRegression;
  const std::vector<double> pred = regression
                                     ? predict_wt(lm.model, data.x)
                                     : predict_probability(lm.model, data.x);
  const char *column = regression ? "predicted_wt_percent" : "probability_good";

  if (!f.output.empty()) {
    std::ofstream out(f.output);
    if (!out)
      throw FileError("cannot write " + f.output);
    out.precision(10);
    out << "polymer_smiles,solvent_smiles," << column << '\n';
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
      const PairRecord &r = ds.records[data.rows[k]];
      out << r.polymer_smiles << ',' << r.solvent_smiles << ',' << pred[k] << '\n';
    }
  }
  json doc;
  doc["command"] = "predict";
  doc["output"] = column;
  doc["predictions"] = pred;
  doc["skipped"] = ds.rows_read - data.x.rows;
  emit(g, doc);
  if (!g.machine() && f.output.empty()) {
    for (double v: pred)
      std::printf("%.6f\n", v);
  }
  return kOk;
}

int cmd_classify(const Globals &g, const PredictFlags &f) {
  check_threshold(f.threshold);
  LoadedModel lm = open_model(f.model);
  Dataset ds = load_pairs(f.input, TargetColumn::kOptional);
  Featurized data = featurize(load_featurizer(g), ds);

  // Regression models are thresholded in wt%; classification models at
  // probability 0.5.
  std::vector<SolventClass> pred;
  if (lm.model.head() == Head::kRegression)
    pred = labels(predict_wt(lm.model, data.x), f.threshold);
  else
    pred = predict_class(lm.model, data.x);

  json doc;
  doc["command"] = "classify";
  doc["threshold"] = f.threshold;
  json out = json::array();
  for (SolventClass c: pred)
    out.push_back(c == SolventClass::kGoodSolvent ? "good" : "non");
  doc["labels"] = out;
  const bool labeled = data.x.rows > 0 && data.y.size() == data.x.rows;
  ClassificationReport report;
  if (labeled) {
    report = confusion(labels(data.y, f.threshold), pred);
    doc["report"] = to_json(report);
  }
  emit(g, doc);
  if (!g.machine()) {
    for (SolventClass c: pred)
      std::printf("%s\n", c == SolventClass::kGoodSolvent ? "good" : "non");
    if (labeled)
      print_confusion_table("classification", { { "all", report } });
  }
  return kOk;
}

int cmd_evaluate(const Globals &g, const PredictFlags &f) {
  LoadedModel lm = open_model(f.model);
  Featurized data = load_input(g, f.input, TargetColumn::kRequired);
  if (data.x.rows == 0)
    throw EmptyDataset("no rows to evaluate");
  json doc;
  doc["command"] = "evaluate";
  if (lm.model.head() == Head::kRegression) {
    const auto pred = predict_wt(lm.model, data.x);
    const auto r = report_of(data.y, pred);
    write_scatter(f.scatter, data.y, pred);
    doc["report"] = to_json(r);
    emit(g, doc);
    if (!g.machine())
      print_regression_table("network regression (wt%)", { { "all", r } });
  } else {
    const auto r = confusion(labels(data.y, f.threshold),
                             predict_class(lm.model, data.x));
    doc["report"] = to_json(r);
    emit(g, doc);
    if (!g.machine())
      print_confusion_table("classification", { { "all", r } });
  }
  return kOk;
}

int cmd_baseline(const Globals &g, ForestFlags f) {
  check_fraction(f.val_fraction);
  f.config.bootstrap = !f.no_bootstrap;
  if (f.mtry > 0)
    f.config.mtry = f.mtry;
  if (f.max_depth >= 0)
    f.config.max_depth = f.max_depth;
  f.config.seed = derive(g.seed, 3);
  try {
    f.config.validate(kPairFeatures);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }

  Featurized data = load_input(g, f.input, TargetColumn::kRequired);
  if (data.x.rows == 0)
    throw EmptyDataset("dataset is empty");
  const Split split = split_indices(data.x.rows, f.val_fraction, g.seed);
  const FeatureMatrix x_train = data.x.select(split.train);
  const FeatureMatrix x_val = data.x.select(split.validation);
  const std::vector<double> wt_train = pick(data.y, split.train);
  const std::vector<double> wt_val = pick(data.y, split.validation);

  const TargetStandardizer st = TargetStandardizer::fit(wt_train);
  RandomForest forest = train_forest(x_train, st.transform(wt_train), f.config);
  auto forest_wt = [&](const FeatureMatrix &x) {
    return st.inverse_transform(forest.predict(x));
  };

  std::optional<Featurized> test;
  if (!f.test.empty())
    test = load_input(g, f.test, TargetColumn::kRequired);
  std::optional<LoadedModel> nn;
  if (!f.model.empty())
    nn = open_model(f.model);

  auto reports = [&](auto &&predict) {
    std::vector<std::pair<std::string, RegressionReport>> rows;
    const auto p_train = predict(x_train);
    const auto p_val = predict(x_val);
    rows.emplace_back("train", report_of(wt_train, p_train));
    rows.emplace_back("validation", report_of(wt_val, p_val));
    std::vector<double> y_all = wt_train, p_all = p_train;
    y_all.insert(y_all.end(), wt_val.begin(), wt_val.end());
    p_all.insert(p_all.end(), p_val.begin(), p_val.end());
    rows.emplace_back("combined", report_of(y_all, p_all));
    if (test && test->x.rows > 0)
      rows.emplace_back("test", report_of(test->y, predict(test->x)));
    return rows;
  };

  json doc;
  doc["command"] = "baseline";
  doc["trees"] = f.config.n_trees;
  doc["bootstrap"] = f.config.bootstrap;
  const auto rf_rows = reports(forest_wt);
  json rf;
  for (const auto &[name, r]: rf_rows)
    rf[name] = to_json(r);
  doc["forest"] = rf;
  std::vector<std::pair<std::string, RegressionReport>> nn_rows;
  if (nn) {
    if (nn->model.head() != Head::kRegression)
      throw LayoutMismatch("--model must be a regression model");
    nn_rows = reports([&](const FeatureMatrix &x) { return predict_wt(nn->model, x); });
    json j;
    for (const auto &[name, r]: nn_rows)
      j[name] = to_json(r);
    doc["network"] = j;
  }
  emit(g, doc);
  if (!g.machine()) {
    print_regression_table("random forest regression (wt%)", rf_rows);
    if (nn)
      print_regression_table("network regression (wt%)", nn_rows);
  }
  return kOk;
}

int cmd_validate_external(const Globals &g, const PredictFlags &f) {
  LoadedModel lm = open_model(f.model);
  if (lm.model.head() != Head::kRegression)
    throw LayoutMismatch("external validation needs a regression model");
  if (f.input.empty())
    throw UsageError("--input is required");
  const std::vector<ReplicateRecord> raw = load_replicates(f.input);
  ExternalSet ext = prepare_external(raw);
  json doc;
  doc["command"] = "validate-external";
  doc["rows"] = raw.size();
  doc["dropped_pressure"] = ext.dropped_pressure;
  doc["excluded_groups"] = ext.excluded_groups;
  doc["excluded_rows"] = ext.excluded_rows;
  doc["pairs"] = ext.dataset.records.size();
  spdlog::info("{} rows: {} off-pressure, {} groups under-replicated, {} pairs kept",
               raw.size(), ext.dropped_pressure, ext.excluded_groups,
               ext.dataset.records.size());
  if (!g.machine())
    std::printf("prepared %zu pairs from %zu rows (%zu off-pressure rows, "
                "%zu under-replicated groups excluded)\n",
                ext.dataset.records.size(), raw.size(), ext.dropped_pressure,
                ext.excluded_groups);
  if (ext.dataset.records.empty())
    throw FileError("no pairs survive filtering");

  Featurized data = featurize(load_featurizer(g), ext.dataset);
  if (data.x.rows == 0)
    throw FileError("no pairs survive featurization");
  const auto pred = predict_wt(lm.model, data.x);
  const auto r = report_of(data.y, pred);
  write_scatter(f.scatter, data.y, pred);
  doc["report"] = to_json(r);
  emit(g, doc);
  if (!g.machine())
    print_regression_table("external validation (wt%)", { { "external", r } });
  return kOk;
}

int exit_for(const std::exception &e, int code) {
  spdlog::error("{}", e.what());
  return code;
}
}  // namespace

int main(int argc, char **argv) {
  auto logger = spdlog::stderr_color_mt("solvo");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app { "Polymer solubility prediction from SMILES" };
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for splits, initialization and training");
  app.add_option("--report", g.report, "Report format")
      ->check(CLI::IsMember({ "table", "machine" }));
  app.add_option("--data-dir", g.data_dir,
                 "Directory with the contribution tables and key file "
                 "(default: $SOLVO_DATA_DIR or the build-time data dir)");
  app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

  std::string feat_in, feat_out;
  auto *featurize_cmd = app.add_subcommand("featurize", "Write the feature matrix of a pair CSV");
  featurize_cmd->add_option("--input", feat_in, "Pair CSV")->required();
  featurize_cmd->add_option("--output", feat_out, "Feature file")->required();

  TrainFlags tf;
  auto *train_cmd = app.add_subcommand("train", "Train the network and save a model");
  train_cmd->add_option("--input", tf.input, "Pair CSV or feature file")->required();
  train_cmd->add_option("--output", tf.output, "Model file")->required();
  train_cmd->add_option("--task", tf.task, "regression or classification");
  train_cmd->add_option("--val-fraction", tf.val_fraction, "Validation share");
  train_cmd->add_option("--epochs", tf.config.max_epochs, "Maximum epochs");
  train_cmd->add_option("--lr", tf.config.learning_rate, "Adam learning rate");
  train_cmd->add_option("--weight-decay", tf.config.weight_decay, "L2 weight decay");
  train_cmd->add_option("--batch-size", tf.config.batch_size, "Mini-batch size");
  train_cmd->add_option("--dropout", tf.config.dropout, "Dropout rate");
  train_cmd->add_option("--patience", tf.config.patience, "Early-stopping patience");
  train_cmd->add_option("--threshold", tf.threshold, "Good-solvent cutoff in wt%");
  train_cmd->add_option("--hidden", tf.hidden, "Comma-separated hidden widths");
  train_cmd->add_option("--layer-order", tf.order, "relu-bn or bn-relu");
  train_cmd->add_flag("--no-batch-norm", tf.no_batch_norm, "Disable batch normalization");
  train_cmd->add_flag("--scale-inputs", tf.scale_inputs, "Standardize input columns");
  train_cmd->add_flag("--decoupled-weight-decay", tf.config.decoupled_weight_decay,
                      "Apply weight decay outside the Adam moments");
  train_cmd->add_option("--scatter", tf.scatter, "Write validation (actual, predicted) CSV");

  PredictFlags pf;
  auto *predict_cmd = app.add_subcommand("predict", "Predict wt% for pairs");
  predict_cmd->add_option("--model", pf.model, "Model file")->required();
  predict_cmd->add_option("--input", pf.input, "Pair CSV");
  predict_cmd->add_option("--polymer", pf.polymer, "Polymer repeat-unit SMILES");
  predict_cmd->add_option("--solvent", pf.solvent, "Solvent SMILES");
  predict_cmd->add_option("--output", pf.output, "Write predictions CSV");

  auto *classify_cmd = app.add_subcommand("classify", "Label pairs as good or non-solvents");
  classify_cmd->add_option("--model", pf.model, "Model file")->required();
  classify_cmd->add_option("--input", pf.input, "Pair CSV")->required();
  classify_cmd->add_option("--threshold", pf.threshold, "Good-solvent cutoff in wt%");

  auto *evaluate_cmd = app.add_subcommand("evaluate", "Score a model on a labeled set");
  evaluate_cmd->add_option("--model", pf.model, "Model file")->required();
  evaluate_cmd->add_option("--input", pf.input, "Pair CSV or feature file")->required();
  evaluate_cmd->add_option("--threshold", pf.threshold, "Good-solvent cutoff in wt%");
  evaluate_cmd->add_option("--scatter", pf.scatter, "Write (actual, predicted) CSV");

  ForestFlags ff;
  auto *baseline_cmd = app.add_subcommand("baseline", "Train and score the random forest");
  baseline_cmd->add_option("--input", ff.input, "Pair CSV or feature file")->required();
  baseline_cmd->add_option("--test", ff.test, "Extra held-out pair CSV or feature file");
  baseline_cmd->add_option("--model", ff.model, "Network model to report alongside");
  baseline_cmd->add_option("--val-fraction", ff.val_fraction, "Validation share");
  baseline_cmd->add_option("--trees", ff.config.n_trees, "Number of trees");
  baseline_cmd->add_option("--min-leaf", ff.config.min_samples_leaf, "Minimum samples per leaf");
  baseline_cmd->add_option("--mtry", ff.mtry, "Features tried per split (default all)");
  baseline_cmd->add_option("--max-depth", ff.max_depth, "Depth limit (default none)");
  baseline_cmd->add_option("--threads", ff.config.threads, "Worker threads (0: all cores)");
  baseline_cmd->add_flag("--no-bootstrap", ff.no_bootstrap, "Grow every tree on all rows");

  auto *external_cmd = app.add_subcommand("validate-external",
                                          "Score a model on replicate measurements");
  external_cmd->add_option("--model", pf.model, "Model file")->required();
  external_cmd->add_option("--input", pf.input, "Replicate CSV")->required();
  external_cmd->add_option("--scatter", pf.scatter, "Write (actual, predicted) CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }
  if (g.verbose)
    spdlog::set_level(spdlog::level::info);

  try {
    if (*featurize_cmd)
      return cmd_featurize(g, feat_in, feat_out);
    if (*train_cmd)
      return cmd_train(g, tf);
    if (*predict_cmd)
      return cmd_predict(g, pf);
    if (*classify_cmd)
      return cmd_classify(g, pf);
    if (*evaluate_cmd)
      return cmd_evaluate(g, pf);
    if (*baseline_cmd)
      return cmd_baseline(g, ff);
    if (*external_cmd)
      return cmd_validate_external(g, pf);
  } catch (const UsageError &e) {
    return exit_for(e, kUsage);
  } catch (const NumericError &e) {
    return exit_for(e, kNumeric);
  } catch (const LayoutMismatch &e) {
    return exit_for(e, kIncompatible);
  } catch (const ShapeMismatch &e) {
    return exit_for(e, kIncompatible);
  } catch (const VersionMismatch &e) {
    return exit_for(e, kIncompatible);
  } catch (const std::exception &e) {
    // Files, headers, rows, SMILES, containers and degenerate data.
    return exit_for(e, kInput);
  }
  return kUsage;
}
