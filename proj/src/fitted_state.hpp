#pragma once

// Internal interface between fit() and the per-classifier training code.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "mcs/classifiers.hpp"

namespace mcs::detail {

/// Standardized training data, row-major.
struct TrainView {
  std::vector<double> values;  // n_rows * n_attr
  std::vector<int> labels;     // -1/+1
  std::size_t n_rows = 0;
  std::size_t n_attr = 0;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_attr, n_attr};
  }
};

class FittedState {
 public:
  virtual ~FittedState() = default;
  /// z is a standardized attribute vector.
  virtual double confidence(std::span<const double> z) const = 0;
  virtual nlohmann::json state_json() const = 0;
};

using StatePtr = std::shared_ptr<const FittedState>;

StatePtr fit_random_forest(const RandomForestParams& p, const TrainView& train,
                           std::uint64_t seed);
StatePtr fit_svm_radial(const SvmRadialParams& p, const TrainView& train);
StatePtr fit_k_nearest(const KNearestParams& p, const TrainView& train);
StatePtr fit_logistic(const LogisticParams& p, const TrainView& train);
StatePtr fit_naive_bayes(const NaiveBayesParams& p, const TrainView& train);

StatePtr random_forest_from_json(const nlohmann::json& j);
StatePtr svm_radial_from_json(const nlohmann::json& j);
StatePtr k_nearest_from_json(const nlohmann::json& j);
StatePtr logistic_from_json(const nlohmann::json& j);
StatePtr naive_bayes_from_json(const nlohmann::json& j);

}  // namespace mcs::detail
