#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcs/classifiers.hpp"
#include "mcs/dataset.hpp"
#include "mcs/ga.hpp"

namespace mcs {

/// Out-of-fold confidences: entry (row, col) is the confidence of
/// classifier col trained on every fold except the row's own, evaluated
/// on that row. Column order follows kAllClassifierKinds.
struct ConfidenceMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // column-major: values[col * n_rows + row]
  FoldAssignment folds;
  std::vector<int> labels;

  double at(std::size_t row, std::size_t col) const {
    return values[col * n_rows + row];
  }
  std::span<const double> column(std::size_t col) const {
    return {values.data() + col * n_rows, n_rows};
  }
};

struct WeightVector {
  std::vector<double> beta;  // each in [0,1]
};

ConfidenceMatrix build_confidence_matrix(const Dataset& data,
                                         const FoldAssignment& folds,
                                         const std::vector<HyperParams>& params,
                                         std::uint64_t seed);

void write_confidence_matrix_csv(const ConfidenceMatrix& m, const std::string& path);

/// Dot product of per-classifier confidences with the weights.
double combined_score(std::span<const double> confidences,
                      const WeightVector& weights);

/// Combined score for every row of the matrix.
std::vector<double> combined_scores(const ConfidenceMatrix& m,
                                    const WeightVector& weights);

/// Mean over folds of the normalized pAUC of the combined scores against
/// the labels. Folds that end up single-class are skipped with a warning.
double weight_fitness(const WeightVector& weights, const ConfidenceMatrix& m,
                      std::pair<double, double> window);

/// GA search over [0,1]^m maximizing weight_fitness.
std::pair<WeightVector, GaResult> tune_weights(const ConfidenceMatrix& m,
                                               const GaConfig& ga_config,
                                               std::pair<double, double> window);

enum class ThresholdCriterion { Accuracy, Youden };
ThresholdCriterion threshold_criterion_from_name(const std::string& name);
std::string threshold_criterion_name(ThresholdCriterion c);

/// Cut-point maximizing the criterion over midpoints of consecutive
/// distinct scores; ties resolved toward the smallest cut-point.
double select_threshold(std::span<const double> scores, std::span<const int> labels,
                        ThresholdCriterion criterion);

/// The deployed multiple classifier system: full-data base models, tuned
/// weights, and the natural threshold alpha.
struct EnsembleModel {
  std::vector<TrainedModel> models;
  WeightVector weights;
  double alpha = 0.5;
  std::pair<double, double> window{0.9, 1.0};

  std::vector<double> confidences(std::span<const double> x) const;
  double score(std::span<const double> x) const;
  /// +1 iff score(x) >= alpha.
  int classify(std::span<const double> x) const;

  /// Persists to a directory: one model document per classifier plus an
  /// ensemble metadata document.
  void save(const std::string& dir) const;
  static EnsembleModel load(const std::string& dir);
};

}  // namespace mcs
