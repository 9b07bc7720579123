#include "mcs/classifiers.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fitted_state.hpp"

namespace mcs {

std::string kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::RandomForest: return "random_forest";
    case ClassifierKind::SvmRadial: return "svm_radial";
    case ClassifierKind::KNearest: return "k_nearest";
    case ClassifierKind::LogisticRegression: return "logistic_regression";
    case ClassifierKind::NaiveBayes: return "naive_bayes";
  }
  throw std::invalid_argument("bad ClassifierKind");
}

ClassifierKind kind_from_name(const std::string& name) {
  for (auto kind : kAllClassifierKinds)
    if (kind_name(kind) == name) return kind;
  throw std::invalid_argument("unknown classifier kind: " + name);
}

HyperParams HyperParams::random_forest(int mtry, int n_trees) {
  return {ClassifierKind::RandomForest, RandomForestParams{mtry, n_trees}};
}
HyperParams HyperParams::svm_radial(double sigma, double c) {
  return {ClassifierKind::SvmRadial, SvmRadialParams{sigma, c}};
}
HyperParams HyperParams::k_nearest(int k) {
  return {ClassifierKind::KNearest, KNearestParams{k}};
}
HyperParams HyperParams::logistic(double decay) {
  return {ClassifierKind::LogisticRegression, LogisticParams{decay}};
}
HyperParams HyperParams::naive_bayes(double fl, bool use_kernel) {
  return {ClassifierKind::NaiveBayes, NaiveBayesParams{fl, use_kernel}};
}

nlohmann::json HyperParams::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind);
  switch (kind) {
    case ClassifierKind::RandomForest: {
      const auto& p = std::get<RandomForestParams>(values);
      j["mtry"] = p.mtry;
      j["n_trees"] = p.n_trees;
      break;
    }
    case ClassifierKind::SvmRadial: {
      const auto& p = std::get<SvmRadialParams>(values);
      j["sigma"] = p.sigma;
      j["c"] = p.c;
      break;
    }
    case ClassifierKind::KNearest:
      j["k"] = std::get<KNearestParams>(values).k;
      break;
    case ClassifierKind::LogisticRegression:
      j["decay"] = std::get<LogisticParams>(values).decay;
      break;
    case ClassifierKind::NaiveBayes: {
      const auto& p = std::get<NaiveBayesParams>(values);
      j["fl"] = p.fl;
      j["use_kernel"] = p.use_kernel;
      break;
    }
  }
  return j;
}

HyperParams HyperParams::from_json(const nlohmann::json& j) {
  const auto kind = kind_from_name(j.at("kind").get<std::string>());
  switch (kind) {
    case ClassifierKind::RandomForest:
      return random_forest(j.at("mtry").get<int>(), j.at("n_trees").get<int>());
    case ClassifierKind::SvmRadial:
      return svm_radial(j.at("sigma").get<double>(), j.at("c").get<double>());
    case ClassifierKind::KNearest:
      return k_nearest(j.at("k").get<int>());
    case ClassifierKind::LogisticRegression:
      return logistic(j.at("decay").get<double>());
    case ClassifierKind::NaiveBayes:
      return naive_bayes(j.at("fl").get<double>(), j.at("use_kernel").get<bool>());
  }
  throw std::invalid_argument("bad ClassifierKind");
}

std::string HyperParams::describe() const { return to_json().dump(); }

Scaler Scaler::fit(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.n_attr();
  if (n == 0) throw std::invalid_argument("Scaler::fit: empty dataset");
  Scaler s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const auto& inst : data.instances)
    for (std::size_t a = 0; a < d; ++a) s.mean[a] += inst.attributes[a];
  for (std::size_t a = 0; a < d; ++a) s.mean[a] /= static_cast<double>(n);
  for (const auto& inst : data.instances)
    for (std::size_t a = 0; a < d; ++a) {
      const double dv = inst.attributes[a] - s.mean[a];
      s.stddev[a] += dv * dv;
    }
  for (std::size_t a = 0; a < d; ++a) {
    s.stddev[a] = std::sqrt(s.stddev[a] / static_cast<double>(n));
    if (s.stddev[a] < 1e-12) s.stddev[a] = 1.0;  // constant attribute
  }
  return s;
}

std::vector<double> Scaler::apply(std::span<const double> x) const {
  if (x.size() != mean.size())
    throw std::invalid_argument("attribute dimension mismatch");
  std::vector<double> z(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) z[a] = (x[a] - mean[a]) / stddev[a];
  return z;
}

TrainedModel::TrainedModel(HyperParams params, Scaler scaler,
                           std::shared_ptr<const detail::FittedState> state)
    : params_(std::move(params)), scaler_(std::move(scaler)), state_(std::move(state)) {}

double TrainedModel::confidence(std::span<const double> x) const {
  if (!state_) throw std::runtime_error("model is not fitted");
  const double c = state_->confidence(scaler_.apply(x));
  return std::clamp(c, 0.0, 1.0);
}

int TrainedModel::predict(std::span<const double> x, double threshold) const {
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("threshold outside [0,1]");
  return confidence(x) >= threshold ? 1 : -1;
}

nlohmann::json TrainedModel::to_json() const {
  if (!state_) throw std::runtime_error("model is not fitted");
  nlohmann::json j;
  j["params"] = params_.to_json();
  j["scaler"] = {{"mean", scaler_.mean}, {"stddev", scaler_.stddev}};
  j["state"] = state_->state_json();
  return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  HyperParams params = HyperParams::from_json(j.at("params"));
  Scaler scaler;
  scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
  scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
  detail::StatePtr state;
  const auto& sj = j.at("state");
  switch (params.kind) {
    case ClassifierKind::RandomForest: state = detail::random_forest_from_json(sj); break;
    case ClassifierKind::SvmRadial: state = detail::svm_radial_from_json(sj); break;
    case ClassifierKind::KNearest: state = detail::k_nearest_from_json(sj); break;
    case ClassifierKind::LogisticRegression: state = detail::logistic_from_json(sj); break;
    case ClassifierKind::NaiveBayes: state = detail::naive_bayes_from_json(sj); break;
  }
  return TrainedModel(std::move(params), std::move(scaler), std::move(state));
}

void TrainedModel::save(const std::string& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json().dump(1) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

TrainedModel TrainedModel::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  return from_json(j);
}

TrainedModel fit(const HyperParams& params, const Dataset& train,
                 std::uint64_t seed) {
  if (!train.fully_labeled())
    throw std::runtime_error("fit requires a fully labeled dataset");
  if (train.count_positive() == 0 || train.count_negative() == 0)
    throw std::runtime_error("fit requires both classes in the training data");

  Scaler scaler = Scaler::fit(train);

  detail::TrainView view;
  view.n_rows = train.size();
  view.n_attr = train.n_attr();
  view.values.reserve(view.n_rows * view.n_attr);
  view.labels.reserve(view.n_rows);
  for (const auto& inst : train.instances) {
    const auto z = scaler.apply(inst.attributes);
    view.values.insert(view.values.end(), z.begin(), z.end());
    view.labels.push_back(*inst.label);
  }

  detail::StatePtr state;
  switch (params.kind) {
    case ClassifierKind::RandomForest:
      state = detail::fit_random_forest(std::get<RandomForestParams>(params.values),
                                        view, seed);
      break;
    case ClassifierKind::SvmRadial:
      state = detail::fit_svm_radial(std::get<SvmRadialParams>(params.values), view);
      break;
    case ClassifierKind::KNearest:
      state = detail::fit_k_nearest(std::get<KNearestParams>(params.values), view);
      break;
    case ClassifierKind::LogisticRegression:
      state = detail::fit_logistic(std::get<LogisticParams>(params.values), view);
      break;
    case ClassifierKind::NaiveBayes:
      state = detail::fit_naive_bayes(std::get<NaiveBayesParams>(params.values), view);
      break;
  }
  return TrainedModel(params, std::move(scaler), std::move(state));
}

}  // namespace mcs
