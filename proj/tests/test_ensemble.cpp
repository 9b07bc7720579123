#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "mcs/ensemble.hpp"
#include "mcs/metrics.hpp"

using namespace mcs;

namespace {

const std::pair<double, double> kWindow{0.9, 1.0};

// A small matrix with a planted signal: column 0 separates the classes,
// the remaining columns are uniform noise.
ConfidenceMatrix planted_matrix(std::size_t n_rows, std::size_t n_cols,
                                int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConfidenceMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.values.assign(n_rows * n_cols, 0.0);
  m.folds.k = k;
  m.folds.fold_of.resize(n_rows);
  m.labels.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    // positives land in every fold as long as n_rows >= 3k
    m.labels[i] = (i / k) % 3 == 0 ? 1 : -1;
    m.folds.fold_of[i] = static_cast<int>(i % k);
    for (std::size_t c = 0; c < n_cols; ++c) {
      double v = unit(rng);
      if (c == 0) v = m.labels[i] == 1 ? 0.6 + 0.4 * v : 0.4 * v;
      m.values[c * n_rows + i] = v;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("combined_score is the weighted sum of confidences") {
  const WeightVector w{{0.701, 0.314, 0.002, 0.026, 0.012}};
  const std::vector<double> ones(5, 1.0);
  CHECK(combined_score(ones, w) == doctest::Approx(1.055).epsilon(1e-12));

  const std::vector<double> conf{0.9, 0.8, 0.1, 0.5, 0.3};
  CHECK(combined_score(conf, w) == doctest::Approx(0.8989).epsilon(1e-12));

  CHECK_THROWS(combined_score(std::vector<double>{0.5}, w));
}

TEST_CASE("combined_scores applies the weights row by row") {
  const ConfidenceMatrix m = planted_matrix(40, 3, 2, 7);
  const WeightVector w{{0.5, 0.25, 0.1}};
  const auto scores = combined_scores(m, w);
  REQUIRE(scores.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    const double expect =
        0.5 * m.at(i, 0) + 0.25 * m.at(i, 1) + 0.1 * m.at(i, 2);
    CHECK(scores[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("weight_fitness on a unit weight equals the column's fold mean") {
  const ConfidenceMatrix m = planted_matrix(60, 3, 3, 11);
  const WeightVector unit0{{1.0, 0.0, 0.0}};
  double expect = 0.0;
  for (int f = 0; f < m.folds.k; ++f) {
    std::vector<double> s;
    std::vector<int> y;
    for (std::size_t i = 0; i < m.n_rows; ++i)
      if (m.folds.fold_of[i] == f) {
        s.push_back(m.at(i, 0));
        y.push_back(m.labels[i]);
      }
    expect += normalized_pauc(s, y, kWindow);
  }
  expect /= m.folds.k;
  CHECK(weight_fitness(unit0, m, kWindow) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weight_fitness is invariant to positive rescaling of the weights") {
  const ConfidenceMatrix m = planted_matrix(80, 4, 4, 13);
  const WeightVector w{{0.7, 0.1, 0.15, 0.05}};
  WeightVector scaled = w;
  for (auto& b : scaled.beta) b *= 0.37;  // ranking unchanged
  CHECK(weight_fitness(w, m, kWindow) ==
        doctest::Approx(weight_fitness(scaled, m, kWindow)).epsilon(1e-12));
}

TEST_CASE("tune_weights finds the planted signal column") {
  const ConfidenceMatrix m = planted_matrix(120, 4, 4, 17);
  GaConfig config;
  config.population_size = 60;
  config.iterations = 40;
  config.seed = 3;
  const auto [weights, result] = tune_weights(m, config, kWindow);
  REQUIRE(weights.beta.size() == 4);

  // tuned weights must do at least as well as every single column
  for (std::size_t c = 0; c < 4; ++c) {
    WeightVector unit{std::vector<double>(4, 0.0)};
    unit.beta[c] = 1.0;
    CHECK(result.best_fitness >= weight_fitness(unit, m, kWindow) - 1e-12);
  }
  CHECK(result.best_fitness == doctest::Approx(weight_fitness(weights, m, kWindow)));
}

TEST_CASE("single-class folds are skipped, an all-bad matrix is rejected") {
  ConfidenceMatrix m = planted_matrix(40, 2, 2, 23);
  for (std::size_t i = 0; i < m.n_rows; ++i)
    if (m.folds.fold_of[i] == 1) m.labels[i] = -1;  // fold 1 loses its positives
  const WeightVector w{{1.0, 0.0}};
  const double with_skip = weight_fitness(w, m, kWindow);

  ConfidenceMatrix only0 = m;
  only0.folds.k = 1;
  for (auto& f : only0.folds.fold_of) f = 0;
  // fold 0 rows are unchanged but now mixed with old fold-1 rows, so compute
  // the expectation directly from fold 0 of the original matrix
  std::vector<double> s;
  std::vector<int> y;
  for (std::size_t i = 0; i < m.n_rows; ++i)
    if (m.folds.fold_of[i] == 0) {
      s.push_back(m.at(i, 0));
      y.push_back(m.labels[i]);
    }
  CHECK(with_skip == doctest::Approx(normalized_pauc(s, y, kWindow)).epsilon(1e-12));

  for (auto& label : m.labels) label = -1;
  CHECK_THROWS(weight_fitness(w, m, kWindow));
}

TEST_CASE("select_threshold picks the separating midpoint") {
  const std::vector<double> scores{0.2, 0.4, 0.6, 0.8};
  const std::vector<int> labels{-1, -1, 1, 1};
  CHECK(select_threshold(scores, labels, ThresholdCriterion::Accuracy) ==
        doctest::Approx(0.5));
  CHECK(select_threshold(scores, labels, ThresholdCriterion::Youden) ==
        doctest::Approx(0.5));
}

TEST_CASE("select_threshold resolves ties toward the smallest cut-point") {
  // both candidate midpoints 0.3 and 0.5 misclassify exactly one instance
  const std::vector<double> scores{0.2, 0.4, 0.6};
  const std::vector<int> labels{-1, 1, -1};
  CHECK(select_threshold(scores, labels, ThresholdCriterion::Accuracy) ==
        doctest::Approx(0.3));
  CHECK_THROWS(select_threshold(std::vector<double>{0.1, 0.2},
                                std::vector<int>{1, 1},
                                ThresholdCriterion::Accuracy));
}

TEST_CASE("ensemble corner case: one weight reproduces the single model") {
  SynthSpec spec;
  spec.n_instances = 100;
  spec.positive_rate = 0.3;
  spec.class_separation = 2.0;
  spec.seed = 31;
  const Dataset data = generate_synthetic(spec);
  const TrainedModel solo = fit(HyperParams::k_nearest(5), data, 8);

  EnsembleModel ens;
  ens.models = {solo, fit(HyperParams::logistic(0.01), data, 8)};
  ens.weights.beta = {1.0, 0.0};
  ens.alpha = 0.5;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& x = data.instances[i].attributes;
    CHECK(ens.score(x) == doctest::Approx(solo.confidence(x)).epsilon(1e-12));
    CHECK(ens.classify(x) == solo.predict(x, 0.5));
  }
}

TEST_CASE("classify uses the >= alpha convention") {
  SynthSpec spec;
  spec.n_instances = 60;
  spec.positive_rate = 0.5;
  spec.class_separation = 3.0;
  spec.seed = 37;
  const Dataset data = generate_synthetic(spec);
  EnsembleModel ens;
  ens.models = {fit(HyperParams::k_nearest(1), data, 2)};
  ens.weights.beta = {1.0};
  for (const auto& inst : data.instances) {
    const double s = ens.score(inst.attributes);
    ens.alpha = s;
    CHECK(ens.classify(inst.attributes) == 1);  // equality classifies positive
  }
}

TEST_CASE("build_confidence_matrix holds out each row's own fold") {
  SynthSpec spec;
  spec.n_instances = 80;
  spec.positive_rate = 0.25;
  spec.class_separation = 2.5;
  spec.seed = 41;
  const Dataset data = generate_synthetic(spec);
  const FoldAssignment folds = stratified_kfold(data, 4, 5);
  const std::vector<HyperParams> params{HyperParams::k_nearest(3),
                                        HyperParams::naive_bayes(0.5, false)};
  const ConfidenceMatrix m = build_confidence_matrix(data, folds, params, 9);
  REQUIRE(m.n_rows == 80);
  REQUIRE(m.n_cols == 2);
  CHECK(m.labels == data.labels());

  const ConfidenceMatrix again = build_confidence_matrix(data, folds, params, 9);
  CHECK(m.values == again.values);
  for (double v : m.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("ensemble save/load round trip preserves behavior") {
  SynthSpec spec;
  spec.n_instances = 70;
  spec.positive_rate = 0.3;
  spec.class_separation = 2.0;
  spec.seed = 43;
  const Dataset data = generate_synthetic(spec);
  EnsembleModel ens;
  ens.models = {fit(HyperParams::k_nearest(3), data, 1),
                fit(HyperParams::naive_bayes(0.5, false), data, 1),
                fit(HyperParams::logistic(0.01), data, 1)};
  ens.weights.beta = {0.6, 0.3, 0.1};
  ens.alpha = 0.4381;
  ens.window = {0.9, 1.0};

  const auto dir = (std::filesystem::temp_directory_path() / "mcs_ens").string();
  std::filesystem::remove_all(dir);
  ens.save(dir);
  const EnsembleModel back = EnsembleModel::load(dir);
  CHECK(back.alpha == ens.alpha);
  CHECK(back.weights.beta == ens.weights.beta);
  CHECK(back.window == ens.window);
  REQUIRE(back.models.size() == 3);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& x = data.instances[i].attributes;
    CHECK(back.score(x) == ens.score(x));
    CHECK(back.classify(x) == ens.classify(x));
  }
}
