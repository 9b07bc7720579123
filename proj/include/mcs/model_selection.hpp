#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcs/classifiers.hpp"
#include "mcs/dataset.hpp"

namespace mcs {

/// Cartesian grid of candidate hyperparameter values for one classifier.
struct GridSpec {
  ClassifierKind kind = ClassifierKind::RandomForest;
  // axis name -> candidate values, enumerated in order; booleans are 0/1
  std::vector<std::pair<std::string, std::vector<double>>> axes;

  /// Default grid densities over the standard search ranges
  /// (mtry in [1,30], sigma in (0,1], C in (0,10], K in [1,100],
  /// decay in [0,10], fL in [0,1] x usekernel).
  static GridSpec defaults(ClassifierKind kind);
  /// Small grids for quick runs; same ranges, fewer points.
  static GridSpec coarse(ClassifierKind kind);

  std::vector<HyperParams> enumerate() const;
};

struct CvScore {
  HyperParams params;
  std::vector<double> fold_scores;  // normalized pAUC per fold
  double mean = 0.0;
};

/// Fit on the complement of each fold, score held-out confidences, and
/// average the normalized pAUC over the window.
CvScore cv_score(const HyperParams& params, const Dataset& data,
                 const FoldAssignment& folds, std::pair<double, double> window,
                 std::uint64_t seed);

/// Exhaustive search over the grid; best = argmax of the mean fold score,
/// ties broken by enumeration order.
std::pair<HyperParams, std::vector<CvScore>> grid_search(
    const GridSpec& spec, const Dataset& data, const FoldAssignment& folds,
    std::pair<double, double> window, std::uint64_t seed);

/// CSV `kind,param_json,fold_1..fold_k,mean`.
void write_grid_report_csv(const std::vector<CvScore>& scores, int k,
                           const std::string& path);

}  // namespace mcs
