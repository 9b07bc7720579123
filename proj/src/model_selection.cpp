#include "mcs/model_selection.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mcs/metrics.hpp"

namespace mcs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(count);
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < count; ++i)
    out.push_back(std::pow(10.0, llo + (lhi - llo) * i / (count - 1)));
  return out;
}

std::vector<double> int_range(int lo, int hi, int step) {
  std::vector<double> out;
  for (int v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

HyperParams params_from_point(ClassifierKind kind,
                              const std::vector<std::pair<std::string, double>>& point) {
  auto get = [&](const std::string& name, double fallback,
                 bool required = false) -> double {
    for (const auto& [n, v] : point)
      if (n == name) return v;
    if (required) throw std::invalid_argument("grid axis missing: " + name);
    return fallback;
  };
  switch (kind) {
    case ClassifierKind::RandomForest:
      return HyperParams::random_forest(static_cast<int>(get("mtry", 0, true)),
                                        static_cast<int>(get("n_trees", 500)));
    case ClassifierKind::SvmRadial:
      return HyperParams::svm_radial(get("sigma", 0, true), get("c", 0, true));
    case ClassifierKind::KNearest:
      return HyperParams::k_nearest(static_cast<int>(get("k", 0, true)));
    case ClassifierKind::LogisticRegression:
      return HyperParams::logistic(get("decay", 0, true));
    case ClassifierKind::NaiveBayes:
      return HyperParams::naive_bayes(get("fl", 0, true),
                                      get("use_kernel", 0, true) != 0.0);
  }
  throw std::invalid_argument("bad ClassifierKind");
}

}  // namespace

GridSpec GridSpec::defaults(ClassifierKind kind) {
  GridSpec g;
  g.kind = kind;
  switch (kind) {
    case ClassifierKind::RandomForest:
      g.axes = {{"mtry", int_range(1, 30, 1)}};
      break;
    case ClassifierKind::SvmRadial:
      g.axes = {{"sigma", log_spaced(1e-3, 1.0, 20)}, {"c", log_spaced(1e-2, 10.0, 20)}};
      break;
    case ClassifierKind::KNearest:
      g.axes = {{"k", int_range(1, 99, 2)}};
      break;
    case ClassifierKind::LogisticRegression:
      g.axes = {{"decay", {0.0, 0.001, 0.01, 0.1, 1.0, 10.0}}};
      break;
    case ClassifierKind::NaiveBayes:
      g.axes = {{"fl", {0.0, 0.5, 1.0}}, {"use_kernel", {0.0, 1.0}}};
      break;
  }
  return g;
}

GridSpec GridSpec::coarse(ClassifierKind kind) {
  GridSpec g;
  g.kind = kind;
  switch (kind) {
    case ClassifierKind::RandomForest:
      g.axes = {{"mtry", {1, 6, 11, 16, 21, 26}}, {"n_trees", {100}}};
      break;
    case ClassifierKind::SvmRadial:
      g.axes = {{"sigma", log_spaced(1e-2, 1.0, 3)}, {"c", log_spaced(0.1, 10.0, 3)}};
      break;
    case ClassifierKind::KNearest:
      g.axes = {{"k", {1, 9, 17, 33, 65}}};
      break;
    case ClassifierKind::LogisticRegression:
      g.axes = {{"decay", {0.0, 0.01, 1.0}}};
      break;
    case ClassifierKind::NaiveBayes:
      g.axes = {{"fl", {0.0, 1.0}}, {"use_kernel", {0.0, 1.0}}};
      break;
  }
  return g;
}

std::vector<HyperParams> GridSpec::enumerate() const {
  for (const auto& [name, values] : axes)
    if (values.empty())
      throw std::invalid_argument("empty grid axis: " + name);

  std::vector<HyperParams> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    std::vector<std::pair<std::string, double>> point;
    point.reserve(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a)
      point.emplace_back(axes[a].first, axes[a].second[idx[a]]);
    out.push_back(params_from_point(kind, point));

    // odometer increment, last axis fastest
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
  }
}

CvScore cv_score(const HyperParams& params, const Dataset& data,
                 const FoldAssignment& folds, std::pair<double, double> window,
                 std::uint64_t seed) {
  if (folds.fold_of.size() != data.size())
    throw std::invalid_argument("fold assignment does not match dataset");

  CvScore out;
  out.params = params;
  for (int f = 0; f < folds.k; ++f) {
    const auto train_idx = folds.complement_indices(f);
    const auto test_idx = folds.fold_indices(f);
    try {
      const TrainedModel model =
          fit(params, subset(data, train_idx), splitmix64(seed ^ (0xF01Dull + f)));
      std::vector<double> scores;
      std::vector<int> labels;
      scores.reserve(test_idx.size());
      for (std::size_t i : test_idx) {
        scores.push_back(model.confidence(data.instances[i].attributes));
        labels.push_back(*data.instances[i].label);
      }
      out.fold_scores.push_back(normalized_pauc(scores, labels, window));
    } catch (const std::exception& e) {
      throw std::runtime_error("fold " + std::to_string(f) + ": " + e.what());
    }
  }
  double sum = 0.0;
  for (double s : out.fold_scores) sum += s;
  out.mean = sum / static_cast<double>(out.fold_scores.size());
  return out;
}

std::pair<HyperParams, std::vector<CvScore>> grid_search(
    const GridSpec& spec, const Dataset& data, const FoldAssignment& folds,
    std::pair<double, double> window, std::uint64_t seed) {
  const auto candidates = spec.enumerate();
  std::vector<CvScore> all;
  all.reserve(candidates.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    all.push_back(cv_score(candidates[i], data, folds, window, seed));
    if (all[i].mean > all[best].mean) best = i;  // strict: ties keep earliest
  }
  return {all[best].params, std::move(all)};
}

void write_grid_report_csv(const std::vector<CvScore>& scores, int k,
                           const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "kind,param_json";
  for (int i = 1; i <= k; ++i) f << ",fold_" << i;
  f << ",mean\n";
  char buf[64];
  for (const auto& s : scores) {
    f << kind_name(s.params.kind) << ",\"" << s.params.describe() << "\"";
    for (double v : s.fold_scores) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      f << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g\n", s.mean);
    f << buf;
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcs
