#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mcs/metrics.hpp"
#include "oracles.hpp"

using namespace mcs;

TEST_CASE("confusion counts match the set definitions") {
  const std::vector<int> preds{1, -1}, labels{1, -1};
  auto c = confusion(preds, labels);
  CHECK(c.tp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);

  const std::vector<int> all_pos{1, 1}, all_neg{-1, -1};
  c = confusion(all_pos, all_neg);
  CHECK(c.fp == 2);

  CHECK_THROWS(confusion(std::vector<int>{1}, std::vector<int>{1, -1}));
}

TEST_CASE("confusion counts sum to n on random vectors") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<int> preds(50), labels(50);
  for (int t = 0; t < 10; ++t) {
    long pos_pred = 0, pos_label = 0;
    for (int i = 0; i < 50; ++i) {
      preds[i] = coin(rng) ? 1 : -1;
      labels[i] = coin(rng) ? 1 : -1;
      if (preds[i] == 1) ++pos_pred;
      if (labels[i] == 1) ++pos_label;
    }
    const auto c = confusion(preds, labels);
    CHECK(c.total() == 50);
    CHECK(c.tp + c.fp == pos_pred);
    CHECK(c.tp + c.fn == pos_label);
  }
}

TEST_CASE("report applies the four formulas") {
  const auto r = report({3, 1, 2, 4});
  CHECK(*r.sensitivity == doctest::Approx(0.6));
  CHECK(*r.specificity == doctest::Approx(0.8));
  CHECK(*r.accuracy == doctest::Approx(0.7));
  CHECK(*r.precision == doctest::Approx(0.75));

  const auto perfect = report({1, 0, 0, 1});
  CHECK(*perfect.sensitivity == 1.0);
  CHECK(*perfect.specificity == 1.0);
  CHECK(*perfect.accuracy == 1.0);
  CHECK(*perfect.precision == 1.0);

  const auto no_pos_pred = report({0, 0, 2, 3});
  CHECK_FALSE(no_pos_pred.precision.has_value());
  CHECK(no_pos_pred.sensitivity.has_value());
}

TEST_CASE("roc_curve on the hand-enumerated example") {
  const std::vector<double> scores{0.9, 0.8, 0.3, 0.2};
  const std::vector<int> labels{1, 1, -1, -1};
  const RocCurve c = roc_curve(scores, labels);
  REQUIRE(c.size() == 5);
  const double expected_fpr[] = {0, 0, 0, 0.5, 1};
  const double expected_tpr[] = {0, 0.5, 1, 1, 1};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(c.fpr[i] == doctest::Approx(expected_fpr[i]));
    CHECK(c.tpr[i] == doctest::Approx(expected_tpr[i]));
  }
}

TEST_CASE("tied scores collapse to a single diagonal step") {
  const std::vector<double> scores{0.5, 0.5, 0.5, 0.5};
  const std::vector<int> labels{1, -1, 1, -1};
  const RocCurve c = roc_curve(scores, labels);
  REQUIRE(c.size() == 2);
  CHECK(c.fpr[0] == 0.0);
  CHECK(c.tpr[0] == 0.0);
  CHECK(c.fpr[1] == 1.0);
  CHECK(c.tpr[1] == 1.0);
  CHECK(auc(c) == doctest::Approx(0.5));
}

TEST_CASE("roc_curve rejects single-class input") {
  CHECK_THROWS(roc_curve(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}));
}

TEST_CASE("roc invariants and mirror property") {
  std::mt19937_64 rng(13);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int t = 0; t < 30; ++t) {
    oracles::random_scored_set(rng, 25, scores, labels);
    const RocCurve c = roc_curve(scores, labels);
    CHECK(c.fpr.front() == 0.0);
    CHECK(c.tpr.front() == 0.0);
    CHECK(c.fpr.back() == 1.0);
    CHECK(c.tpr.back() == 1.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
      CHECK(c.fpr[i] >= c.fpr[i - 1]);
      CHECK(c.tpr[i] >= c.tpr[i - 1]);
    }
    // strictly increasing score transform leaves the curve unchanged
    std::vector<double> transformed(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      transformed[i] = std::exp(3.0 * scores[i]) + 1.0;
    const RocCurve c2 = roc_curve(transformed, labels);
    REQUIRE(c2.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c2.fpr[i] == doctest::Approx(c.fpr[i]));
      CHECK(c2.tpr[i] == doctest::Approx(c.tpr[i]));
    }
    // negating scores mirrors AUC through the diagonal
    std::vector<double> negated(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) negated[i] = -scores[i];
    CHECK(auc(roc_curve(negated, labels)) == doctest::Approx(1.0 - auc(c)).epsilon(1e-12));
  }
}

TEST_CASE("auc equals the pairwise probability oracle") {
  std::mt19937_64 rng(17);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int t = 0; t < 50; ++t) {
    oracles::random_scored_set(rng, 30, scores, labels);
    const double trapezoid = auc(roc_curve(scores, labels));
    CHECK(trapezoid == doctest::Approx(oracles::pairwise_auc(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("partial_auc window corner cases") {
  const std::vector<double> perfect{0.9, 0.8, 0.2, 0.1};
  const std::vector<int> labels{1, 1, -1, -1};
  auto p = partial_auc(roc_curve(perfect, labels), 0.9, 1.0);
  CHECK(p.raw_area == doctest::Approx(0.1));
  CHECK(p.normalized == doctest::Approx(1.0));

  const std::vector<double> inverted{0.1, 0.2, 0.8, 0.9};
  p = partial_auc(roc_curve(inverted, labels), 0.9, 1.0);
  CHECK(p.raw_area == doctest::Approx(0.0));

  CHECK_THROWS(partial_auc(roc_curve(perfect, labels), 0.9, 0.8));
}

TEST_CASE("partial_auc over [0,1] equals auc and widening is monotone") {
  std::mt19937_64 rng(19);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int t = 0; t < 20; ++t) {
    oracles::random_scored_set(rng, 40, scores, labels);
    const RocCurve c = roc_curve(scores, labels);
    CHECK(partial_auc(c, 0.0, 1.0).raw_area == doctest::Approx(auc(c)).epsilon(1e-12));
    double prev = 0.0;
    for (double lo : {0.8, 0.6, 0.4, 0.2, 0.0}) {
      const double area = partial_auc(c, lo, 1.0).raw_area;
      CHECK(area >= prev - 1e-15);
      prev = area;
    }
  }
}

TEST_CASE("partial_auc matches the fine-grid Riemann oracle") {
  std::mt19937_64 rng(23);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int t = 0; t < 5; ++t) {
    oracles::random_scored_set(rng, 40, scores, labels);
    const double trapezoid = partial_auc(roc_curve(scores, labels), 0.9, 1.0).raw_area;
    const double riemann = oracles::riemann_pauc(scores, labels, 0.9, 1.0);
    CHECK(std::abs(trapezoid - riemann) < 1e-4);
  }
}

TEST_CASE("bootstrap test: identical columns give p near 1") {
  std::mt19937_64 rng(29);
  std::vector<double> scores;
  std::vector<int> labels;
  oracles::random_scored_set(rng, 80, scores, labels);
  const double p = bootstrap_pauc_test(scores, scores, labels, {0.9, 1.0}, 200, 5);
  CHECK(p >= 0.95);
}

TEST_CASE("bootstrap test input validation") {
  const std::vector<double> s{0.1, 0.9};
  const std::vector<int> y{-1, 1};
  CHECK_THROWS(bootstrap_pauc_test(s, s, y, {0.9, 1.0}, 50, 1));  // n_boot too small
  CHECK_THROWS(bootstrap_pauc_test(s, std::vector<double>{0.1}, y, {0.9, 1.0}, 100, 1));
}
