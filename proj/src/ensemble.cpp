#include "mcs/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mcs/kernels.hpp"
#include "mcs/metrics.hpp"

namespace mcs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ConfidenceMatrix build_confidence_matrix(const Dataset& data,
                                         const FoldAssignment& folds,
                                         const std::vector<HyperParams>& params,
                                         std::uint64_t seed) {
  if (folds.fold_of.size() != data.size())
    throw std::invalid_argument("fold assignment does not match dataset");

  ConfidenceMatrix m;
  m.n_rows = data.size();
  m.n_cols = params.size();
  m.values.assign(m.n_rows * m.n_cols, 0.0);
  m.folds = folds;
  m.labels = data.labels();

  for (std::size_t c = 0; c < params.size(); ++c) {
    for (int f = 0; f < folds.k; ++f) {
      try {
        const TrainedModel model = fit(params[c], subset(data, folds.complement_indices(f)),
                                       splitmix64(seed ^ (0xC0FEull + 131 * c + f)));
        for (std::size_t i : folds.fold_indices(f))
          m.values[c * m.n_rows + i] = model.confidence(data.instances[i].attributes);
      } catch (const std::exception& e) {
        throw std::runtime_error("classifier " + kind_name(params[c].kind) + ", fold " +
                                 std::to_string(f) + ": " + e.what());
      }
    }
  }
  return m;
}

void write_confidence_matrix_csv(const ConfidenceMatrix& m, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "row,fold,label";
  for (std::size_t c = 0; c < m.n_cols; ++c) f << ",c" << c + 1;
  f << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    f << i << ',' << m.folds.fold_of[i] << ',' << m.labels[i];
    for (std::size_t c = 0; c < m.n_cols; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", m.at(i, c));
      f << buf;
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

double combined_score(std::span<const double> confidences,
                      const WeightVector& weights) {
  if (confidences.size() != weights.beta.size())
    throw std::invalid_argument("confidence/weight dimension mismatch");
  return kernels::dot(confidences, weights.beta);
}

std::vector<double> combined_scores(const ConfidenceMatrix& m,
                                    const WeightVector& weights) {
  if (m.n_cols != weights.beta.size())
    throw std::invalid_argument("matrix/weight dimension mismatch");
  std::vector<double> out(m.n_rows, 0.0);
  for (std::size_t c = 0; c < m.n_cols; ++c)
    kernels::axpy(weights.beta[c], m.column(c), out);
  return out;
}

double weight_fitness(const WeightVector& weights, const ConfidenceMatrix& m,
                      std::pair<double, double> window) {
  const std::vector<double> scores = combined_scores(m, weights);

  double sum = 0.0;
  int used = 0;
  std::vector<double> fold_scores;
  std::vector<int> fold_labels;
  for (int f = 0; f < m.folds.k; ++f) {
    fold_scores.clear();
    fold_labels.clear();
    for (std::size_t i = 0; i < m.n_rows; ++i) {
      if (m.folds.fold_of[i] == f) {
        fold_scores.push_back(scores[i]);
        fold_labels.push_back(m.labels[i]);
      }
    }
    const bool has_pos = std::count(fold_labels.begin(), fold_labels.end(), 1) > 0;
    const bool has_neg = std::count(fold_labels.begin(), fold_labels.end(), -1) > 0;
    if (!has_pos || !has_neg) {
      std::cerr << "warning: fold " << f << " is single-class, skipped in fitness\n";
      continue;
    }
    sum += normalized_pauc(fold_scores, fold_labels, window);
    ++used;
  }
  if (used == 0) throw std::runtime_error("no usable fold in weight_fitness");
  return sum / used;
}

std::pair<WeightVector, GaResult> tune_weights(const ConfidenceMatrix& m,
                                               const GaConfig& ga_config,
                                               std::pair<double, double> window) {
  auto fitness = [&m, window](const Genome& g) {
    WeightVector w{g.genes};
    return weight_fitness(w, m, window);
  };
  GaResult result = run_ga(fitness, ga_config, static_cast<int>(m.n_cols));
  return {WeightVector{result.best.genes}, std::move(result)};
}

ThresholdCriterion threshold_criterion_from_name(const std::string& name) {
  if (name == "accuracy") return ThresholdCriterion::Accuracy;
  if (name == "youden") return ThresholdCriterion::Youden;
  throw std::invalid_argument("unknown threshold criterion: " + name);
}

std::string threshold_criterion_name(ThresholdCriterion c) {
  return c == ThresholdCriterion::Accuracy ? "accuracy" : "youden";
}

double select_threshold(std::span<const double> scores, std::span<const int> labels,
                        ThresholdCriterion criterion) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("score/label length mismatch");
  const long n_pos = std::count(labels.begin(), labels.end(), 1);
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::runtime_error("select_threshold requires both classes");

  std::vector<double> distinct(scores.begin(), scores.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> candidates;
  for (std::size_t i = 1; i < distinct.size(); ++i)
    candidates.push_back((distinct[i - 1] + distinct[i]) / 2.0);
  if (candidates.empty()) candidates.push_back(distinct.front());

  double best_alpha = candidates.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (double alpha : candidates) {
    long tp = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const int pred = scores[i] >= alpha ? 1 : -1;
      if (pred == 1 && labels[i] == 1) ++tp;
      if (pred == -1 && labels[i] == -1) ++tn;
    }
    const double sens = static_cast<double>(tp) / n_pos;
    const double spec = static_cast<double>(tn) / n_neg;
    const double value = criterion == ThresholdCriterion::Accuracy
                             ? static_cast<double>(tp + tn) / scores.size()
                             : sens + spec - 1.0;
    if (value > best_value) {  // strict: ties keep the smallest alpha
      best_value = value;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

std::vector<double> EnsembleModel::confidences(std::span<const double> x) const {
  std::vector<double> c;
  c.reserve(models.size());
  for (const auto& m : models) c.push_back(m.confidence(x));
  return c;
}

double EnsembleModel::score(std::span<const double> x) const {
  return combined_score(confidences(x), weights);
}

int EnsembleModel::classify(std::span<const double> x) const {
  return score(x) >= alpha ? 1 : -1;
}

void EnsembleModel::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (std::size_t i = 0; i < models.size(); ++i)
    models[i].save(dir + "/model_" + std::to_string(i + 1) + "_" +
                   kind_name(models[i].kind()) + ".json");
  nlohmann::json meta;
  meta["weights"] = weights.beta;
  meta["alpha"] = alpha;
  meta["window"] = {window.first, window.second};
  nlohmann::json kinds = nlohmann::json::array();
  for (const auto& m : models) kinds.push_back(kind_name(m.kind()));
  meta["kinds"] = kinds;
  std::ofstream f(dir + "/ensemble.json", std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + dir + "/ensemble.json");
  f << meta.dump(1) << '\n';
}

EnsembleModel EnsembleModel::load(const std::string& dir) {
  std::ifstream f(dir + "/ensemble.json");
  if (!f) throw std::runtime_error("cannot open " + dir + "/ensemble.json");
  nlohmann::json meta;
  f >> meta;

  EnsembleModel out;
  out.weights.beta = meta.at("weights").get<std::vector<double>>();
  out.alpha = meta.at("alpha").get<double>();
  out.window = {meta.at("window")[0].get<double>(), meta.at("window")[1].get<double>()};
  const auto kinds = meta.at("kinds").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < kinds.size(); ++i)
    out.models.push_back(TrainedModel::load(dir + "/model_" + std::to_string(i + 1) +
                                            "_" + kinds[i] + ".json"));
  return out;
}

}  // namespace mcs
