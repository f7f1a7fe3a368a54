//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#include "solvo/metrics.h"

#include <cmath>

namespace solvo {
namespace {
void check(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty() || y.size() != yhat.size())
    throw EmptyInput("metric inputs must be non-empty and equal length");
}
}  // namespace

double mae(std::span<const double> y, std::span<const double> yhat) {
  check(y, yhat);
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    s += std::abs(y[i] - yhat[i]);
  return s / static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> yhat) {
  check(y, yhat);
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    s += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  return std::sqrt(s / static_cast<double>(y.size()));
}

double r2(std::span<const double> y, std::span<const double> yhat) {
  check(y, yhat);
  double mean = 0;
  for (double v: y)
    mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (!(ss_tot > 0))
    throw ConstantTarget("r2 is undefined for a constant target");
  return 1.0 - ss_res / ss_tot;
}

RegressionReport regression_report(std::span<const double> y,
                                   std::span<const double> yhat) {
  RegressionReport r;
  r.mae = mae(y, yhat);
  r.rmse = rmse(y, yhat);
  r.r2 = r2(y, yhat);
  r.n = y.size();
  return r;
}

SolventClass label(double wt, double threshold) {
  return wt > threshold ? SolventClass::kGoodSolvent
                        : SolventClass::kNonSolvent;
}

std::vector<SolventClass> labels(std::span<const double> wt, double threshold) {
  std::vector<SolventClass> out;
  out.reserve(wt.size());
  for (double w: wt)
    out.push_back(label(w, threshold));
  return out;
}

SolventClass label_from_probability(double p) {
  return p > 0.5 ? SolventClass::kGoodSolvent : SolventClass::kNonSolvent;
}

ClassificationReport confusion(std::span<const SolventClass> truth,
                               std::span<const SolventClass> predicted) {
  if (truth.empty() || truth.size() != predicted.size())
    throw EmptyInput("confusion inputs must be non-empty and equal length");
  ClassificationReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    bool actual = truth[i] == SolventClass::kGoodSolvent;
    bool guess = predicted[i] == SolventClass::kGoodSolvent;
    if (actual && guess)
      ++r.tp;
    else if (!actual && guess)
      ++r.fp;
    else if (!actual && !guess)
      ++r.tn;
    else
      ++r.fn;
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.n());
  return r;
}
}  // namespace solvo
