//
// solvo - polymer solubility prediction from SMILES
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SOLVO_METRICS_H_
#define SOLVO_METRICS_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace solvo {
// wt% above which a solvent counts as good.
inline constexpr double kGoodSolventThreshold = 0.005;

enum class SolventClass { kNonSolvent = 0, kGoodSolvent = 1 };

class EmptyInput: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ConstantTarget: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct RegressionReport {
  double mae = 0;
  double rmse = 0;
  double r2 = 0;
  std::size_t n = 0;
};

struct ClassificationReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double accuracy = 0;

  std::size_t n() const { return tp + fp + tn + fn; }
};

// All throw EmptyInput on empty or mismatched inputs.
double mae(std::span<const double> y, std::span<const double> yhat);
double rmse(std::span<const double> y, std::span<const double> yhat);
// 1 - SS_res / SS_tot; throws ConstantTarget when y has no spread.
double r2(std::span<const double> y, std::span<const double> yhat);
RegressionReport regression_report(std::span<const double> y,
                                   std::span<const double> yhat);

// Good solvent iff wt > threshold (strict).
SolventClass label(double wt, double threshold = kGoodSolventThreshold);
std::vector<SolventClass> labels(std::span<const double> wt,
                                 double threshold = kGoodSolventThreshold);

// Good solvent iff p > 0.5 (strict; 0.5 itself is a non-solvent).
SolventClass label_from_probability(double p);

// Positive class = good solvent.
ClassificationReport confusion(std::span<const SolventClass> truth,
                               std::span<const SolventClass> predicted);
}  // namespace solvo

#endif  // SOLVO_METRICS_H_
