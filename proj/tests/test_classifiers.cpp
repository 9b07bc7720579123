#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "mcs/classifiers.hpp"
#include "mcs/metrics.hpp"

using namespace mcs;

namespace {

Dataset one_attr(const std::vector<std::pair<double, int>>& points) {
  Dataset ds;
  ds.attribute_names = {"attr_1"};
  int i = 0;
  for (auto [x, y] : points) ds.instances.push_back({"p" + std::to_string(i++), {x}, y});
  return ds;
}

double validation_auc(const TrainedModel& model, const Dataset& validation) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& inst : validation.instances) {
    scores.push_back(model.confidence(inst.attributes));
    labels.push_back(*inst.label);
  }
  return auc(roc_curve(scores, labels));
}

std::vector<HyperParams> mid_grid_params() {
  return {HyperParams::random_forest(5, 50), HyperParams::svm_radial(0.1, 1.0),
          HyperParams::k_nearest(9), HyperParams::logistic(0.01),
          HyperParams::naive_bayes(0.5, false)};
}

}  // namespace

TEST_CASE("k-nearest with k=1 reproduces training labels") {
  const Dataset train = one_attr({{0.0, 1}, {1.0, -1}, {2.0, 1}, {3.0, -1}});
  const TrainedModel model = fit(HyperParams::k_nearest(1), train, 0);
  for (const auto& inst : train.instances)
    CHECK(model.confidence(inst.attributes) ==
          doctest::Approx(*inst.label == 1 ? 1.0 : 0.0));
}

TEST_CASE("k-nearest counts neighbor labels") {
  // neighbors of 0.5 at K=3 are 0,1 (positive) and 2 (negative)
  const Dataset train = one_attr({{0.0, 1}, {1.0, 1}, {2.0, -1}, {10.0, -1}});
  const TrainedModel model = fit(HyperParams::k_nearest(3), train, 0);
  const std::vector<double> q{0.5};
  CHECK(model.confidence(q) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("k-nearest boundary ties are included and renormalized") {
  // query 0: distances 1,1,1,1 -> all four tie at the k=2 boundary
  const Dataset train = one_attr({{-1.0, 1}, {-1.0, 1}, {1.0, -1}, {1.0, -1}});
  const TrainedModel model = fit(HyperParams::k_nearest(2), train, 0);
  const std::vector<double> q{0.0};
  CHECK(model.confidence(q) == doctest::Approx(0.5));
}

TEST_CASE("logistic regression separates a separable toy set") {
  Dataset train;
  train.attribute_names = {"attr_1", "attr_2"};
  int i = 0;
  for (double x : {-2.0, -1.5, -1.0})
    train.instances.push_back({"n" + std::to_string(i++), {x, -x}, -1});
  for (double x : {1.0, 1.5, 2.0})
    train.instances.push_back({"p" + std::to_string(i++), {x, -x}, 1});
  const TrainedModel model = fit(HyperParams::logistic(0.0), train, 0);
  for (const auto& inst : train.instances)
    CHECK(model.predict(inst.attributes, 0.5) == *inst.label);
}

TEST_CASE("naive bayes is 0.5 under identical class densities and priors") {
  const Dataset train = one_attr({{-1.0, 1}, {1.0, 1}, {-1.0, -1}, {1.0, -1}});
  const TrainedModel model = fit(HyperParams::naive_bayes(0.0, false), train, 0);
  const std::vector<double> q{0.3};
  CHECK(model.confidence(q) == doctest::Approx(0.5));
}

TEST_CASE("predict uses the >= threshold convention") {
  const Dataset train = one_attr({{0.0, 1}, {1.0, 1}, {2.0, -1}, {10.0, -1}});
  const TrainedModel model = fit(HyperParams::k_nearest(1), train, 0);
  const std::vector<double> on_pos{0.0};
  CHECK(model.confidence(on_pos) == doctest::Approx(1.0));
  CHECK(model.predict(on_pos, 1.0) == 1);  // equality predicts +1
  const std::vector<double> on_neg{10.0};
  CHECK(model.predict(on_neg, 1.0) == -1);
  CHECK(model.predict(on_neg, 0.0) == 1);  // confidence 0 >= threshold 0
  CHECK_THROWS(model.predict(on_pos, 1.5));
}

TEST_CASE("fit rejects single-class data and bad inputs") {
  const Dataset single = one_attr({{0.0, 1}, {1.0, 1}});
  for (const auto& p : mid_grid_params()) CHECK_THROWS(fit(p, single, 0));

  const Dataset ok = one_attr({{0.0, 1}, {1.0, -1}});
  const TrainedModel model = fit(HyperParams::k_nearest(1), ok, 0);
  CHECK_THROWS(model.confidence(std::vector<double>{1.0, 2.0}));  // wrong dimension
}

TEST_CASE("confidence stays in [0,1] and is deterministic for every kind") {
  SynthSpec spec;
  spec.n_instances = 150;
  spec.positive_rate = 0.3;
  spec.class_separation = 1.0;
  spec.seed = 5;
  const Dataset data = generate_synthetic(spec);
  for (const auto& p : mid_grid_params()) {
    CAPTURE(p.describe());
    const TrainedModel a = fit(p, data, 99);
    const TrainedModel b = fit(p, data, 99);
    for (std::size_t i = 0; i < 30; ++i) {
      const double ca = a.confidence(data.instances[i].attributes);
      CHECK(ca >= 0.0);
      CHECK(ca <= 1.0);
      CHECK(ca == b.confidence(data.instances[i].attributes));
    }
  }
}

TEST_CASE("serialization reproduces confidences bit-exactly") {
  SynthSpec spec;
  spec.n_instances = 80;
  spec.positive_rate = 0.4;
  spec.class_separation = 2.0;
  spec.seed = 2;
  const Dataset data = generate_synthetic(spec);
  auto params = mid_grid_params();
  params.push_back(HyperParams::naive_bayes(0.5, true));  // kernel density variant
  for (const auto& p : params) {
    CAPTURE(p.describe());
    const TrainedModel model = fit(p, data, 1);
    const auto path = (std::filesystem::temp_directory_path() / "mcs_model.json").string();
    model.save(path);
    const TrainedModel loaded = TrainedModel::load(path);
    for (std::size_t i = 0; i < 20; ++i)
      CHECK(model.confidence(data.instances[i].attributes) ==
            loaded.confidence(data.instances[i].attributes));
  }
}

TEST_CASE("random forest confidence equals a vote recount over serialized trees") {
  SynthSpec spec;
  spec.n_instances = 120;
  spec.positive_rate = 0.3;
  spec.class_separation = 2.0;
  spec.seed = 6;
  const Dataset data = generate_synthetic(spec);
  const TrainedModel model = fit(HyperParams::random_forest(5, 100), data, 42);
  const nlohmann::json j = model.to_json();
  const auto& trees = j.at("state").at("trees");
  REQUIRE(trees.size() == 100);

  const auto mean = j.at("scaler").at("mean").get<std::vector<double>>();
  const auto stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
  for (std::size_t q = 0; q < 25; ++q) {
    const auto& x = data.instances[q].attributes;
    std::vector<double> z(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) z[a] = (x[a] - mean[a]) / stddev[a];

    long votes = 0;
    for (const auto& t : trees) {
      int node = 0;
      while (t.at("attr")[node].get<int>() >= 0) {
        const int attr = t.at("attr")[node].get<int>();
        node = z[attr] < t.at("threshold")[node].get<double>()
                   ? t.at("left")[node].get<int>()
                   : t.at("right")[node].get<int>();
      }
      if (t.at("vote")[node].get<int>() == 1) ++votes;
    }
    CHECK(model.confidence(x) == doctest::Approx(votes / 100.0).epsilon(1e-15));
  }
}

TEST_CASE("standardization absorbs affine attribute rescaling") {
  SynthSpec spec;
  spec.n_instances = 100;
  spec.positive_rate = 0.4;
  spec.class_separation = 2.0;
  spec.seed = 3;
  const Dataset data = generate_synthetic(spec);
  Dataset rescaled = data;
  for (auto& inst : rescaled.instances) {
    inst.attributes[0] = inst.attributes[0] * 100.0 + 5.0;
    inst.attributes[1] = inst.attributes[1] * -0.01;
  }
  for (const auto& p : {HyperParams::k_nearest(5), HyperParams::svm_radial(0.1, 1.0),
                        HyperParams::logistic(0.01)}) {
    CAPTURE(p.describe());
    const TrainedModel original = fit(p, data, 7);
    const TrainedModel scaled = fit(p, rescaled, 7);
    for (std::size_t i = 0; i < 30; ++i)
      CHECK(original.predict(data.instances[i].attributes, 0.5) ==
            scaled.predict(rescaled.instances[i].attributes, 0.5));
  }
}

TEST_CASE("no signal means chance-level AUC, strong signal is learnable") {
  SynthSpec flat;
  flat.n_instances = 2000;
  flat.class_separation = 0.0;
  flat.seed = 10;
  const Dataset noise = generate_synthetic(flat);
  SynthSpec holdout = flat;
  holdout.seed = 99;
  const TrainedModel chance = fit(HyperParams::logistic(0.01), noise, 1);
  CHECK(std::abs(validation_auc(chance, generate_synthetic(holdout)) - 0.5) < 0.05);

  SynthSpec strong = flat;
  strong.class_separation = 4.0;
  strong.seed = 11;
  const Dataset separable = generate_synthetic(strong);
  const TrainedModel good = fit(HyperParams::logistic(0.01), separable, 1);
  CHECK(validation_auc(good, separable) > 0.95);
}
