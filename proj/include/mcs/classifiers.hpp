#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include "json.hpp"
#include "mcs/dataset.hpp"

namespace mcs {

enum class ClassifierKind {
  RandomForest,
  SvmRadial,
  KNearest,
  LogisticRegression,
  NaiveBayes,
};

inline constexpr std::array<ClassifierKind, 5> kAllClassifierKinds = {
    ClassifierKind::RandomForest, ClassifierKind::SvmRadial,
    ClassifierKind::KNearest, ClassifierKind::LogisticRegression,
    ClassifierKind::NaiveBayes};

std::string kind_name(ClassifierKind kind);
ClassifierKind kind_from_name(const std::string& name);

struct RandomForestParams {
  int mtry = 5;
  int n_trees = 500;
};
struct SvmRadialParams {
  double sigma = 0.1;  // kernel exp(-sigma * |u-v|^2)
  double c = 1.0;
};
struct KNearestParams {
  int k = 5;
};
struct LogisticParams {
  double decay = 0.0;  // L2 penalty coefficient
};
struct NaiveBayesParams {
  double fl = 0.0;  // additive smoothing on class priors
  bool use_kernel = false;
};

struct HyperParams {
  ClassifierKind kind = ClassifierKind::RandomForest;
  std::variant<RandomForestParams, SvmRadialParams, KNearestParams,
               LogisticParams, NaiveBayesParams>
      values;

  static HyperParams random_forest(int mtry, int n_trees = 500);
  static HyperParams svm_radial(double sigma, double c);
  static HyperParams k_nearest(int k);
  static HyperParams logistic(double decay);
  static HyperParams naive_bayes(double fl, bool use_kernel);

  nlohmann::json to_json() const;
  static HyperParams from_json(const nlohmann::json& j);
  std::string describe() const;
};

/// Per-attribute standardization fitted on training data.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // floored at a small epsilon

  static Scaler fit(const Dataset& data);
  std::vector<double> apply(std::span<const double> x) const;
};

namespace detail {
class FittedState;
}

/// An immutable fitted classifier exposing a confidence-in-positive-class
/// function with range [0,1].
class TrainedModel {
 public:
  TrainedModel() = default;
  TrainedModel(HyperParams params, Scaler scaler,
               std::shared_ptr<const detail::FittedState> state);

  ClassifierKind kind() const { return params_.kind; }
  const HyperParams& params() const { return params_; }
  const Scaler& scaler() const { return scaler_; }

  double confidence(std::span<const double> x) const;
  /// +1 iff confidence(x) >= threshold.
  int predict(std::span<const double> x, double threshold) const;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static TrainedModel load(const std::string& path);

 private:
  HyperParams params_;
  Scaler scaler_;
  std::shared_ptr<const detail::FittedState> state_;
};

/// Train a classifier. Deterministic given (params, train, seed).
/// Requires labeled data with both classes present.
TrainedModel fit(const HyperParams& params, const Dataset& train,
                 std::uint64_t seed);

}  // namespace mcs
