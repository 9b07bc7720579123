#include "mcs/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "mcs/kernels.hpp"
#include "mcs/metrics.hpp"

namespace fs = std::filesystem;

namespace mcs {

namespace {

constexpr const char* kVersion = "1.0.0";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Writers go through a temp file and a rename so partially written
/// outputs never appear under their final name.
template <typename Writer>
void atomic_write(const std::string& path, Writer&& writer) {
  const std::string tmp = path + ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

std::string field(std::optional<double> v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

struct ReportRow {
  std::string name;
  MetricReport metrics;
  double pauc = 0.0;
};

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "classifier,accuracy,precision,sensitivity,specificity,pauc\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.pauc);
    f << r.name << ',' << field(r.metrics.accuracy) << ',' << field(r.metrics.precision)
      << ',' << field(r.metrics.sensitivity) << ',' << field(r.metrics.specificity)
      << ',' << buf << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<HyperParams> load_chosen_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " (run the train stage first)");
  nlohmann::json j;
  f >> j;
  std::vector<HyperParams> out;
  for (const auto& pj : j.at("params")) out.push_back(HyperParams::from_json(pj));
  return out;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["data_csv"] = data_csv;
  j["synth"] = {{"n_instances", synth.n_instances},
                {"positive_rate", synth.positive_rate},
                {"n_attr", synth.n_attr},
                {"block_names", synth.block_names},
                {"class_separation", synth.class_separation}};
  j["split_fraction"] = split_fraction;
  j["folds"] = folds;
  j["window"] = {window.first, window.second};
  j["grid"] = grid;
  j["ga"] = {{"population_size", ga.population_size},
             {"iterations", ga.iterations},
             {"mutation_rate", ga.mutation_rate},
             {"crossover_rate", ga.crossover_rate},
             {"elite_count", ga.elite_count},
             {"scaling_multiple", ga.scaling_multiple}};
  j["threshold_criterion"] = threshold_criterion_name(threshold_criterion);
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("data_csv")) c.data_csv = j["data_csv"].get<std::string>();
  if (j.contains("synth")) {
    const auto& s = j["synth"];
    if (s.contains("n_instances")) c.synth.n_instances = s["n_instances"].get<std::size_t>();
    if (s.contains("positive_rate")) c.synth.positive_rate = s["positive_rate"].get<double>();
    if (s.contains("n_attr")) c.synth.n_attr = s["n_attr"].get<std::size_t>();
    if (s.contains("block_names"))
      c.synth.block_names = s["block_names"].get<std::vector<std::string>>();
    if (s.contains("class_separation"))
      c.synth.class_separation = s["class_separation"].get<double>();
  }
  if (j.contains("split_fraction")) c.split_fraction = j["split_fraction"].get<double>();
  if (j.contains("folds")) c.folds = j["folds"].get<int>();
  if (j.contains("window"))
    c.window = {j["window"][0].get<double>(), j["window"][1].get<double>()};
  if (j.contains("grid")) c.grid = j["grid"].get<std::string>();
  if (j.contains("ga")) {
    const auto& g = j["ga"];
    if (g.contains("population_size")) c.ga.population_size = g["population_size"].get<int>();
    if (g.contains("iterations")) c.ga.iterations = g["iterations"].get<int>();
    if (g.contains("mutation_rate")) c.ga.mutation_rate = g["mutation_rate"].get<double>();
    if (g.contains("crossover_rate")) c.ga.crossover_rate = g["crossover_rate"].get<double>();
    if (g.contains("elite_count")) c.ga.elite_count = g["elite_count"].get<int>();
    if (g.contains("scaling_multiple"))
      c.ga.scaling_multiple = g["scaling_multiple"].get<double>();
  }
  if (j.contains("threshold_criterion"))
    c.threshold_criterion =
        threshold_criterion_from_name(j["threshold_criterion"].get<std::string>());
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  f >> j;
  return from_json(j);
}

std::uint64_t RunConfig::stage_seed(const std::string& stage) const {
  return splitmix64(seed ^ fnv1a(stage));
}

void stage_generate(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  Dataset data;
  if (config.data_csv.empty()) {
    SynthSpec spec = config.synth;
    spec.seed = config.stage_seed("generate");
    data = generate_synthetic(spec);
  } else {
    data = load_csv(config.data_csv);
    data.validate();
  }
  atomic_write(config.data_path(), [&](const std::string& p) { write_csv(data, p); });
}

void stage_split(const RunConfig& config) {
  const Dataset data = load_csv(config.data_path());
  const SplitPair split =
      split_train_validation(data, config.split_fraction, config.stage_seed("split"));
  atomic_write(config.train_path(),
               [&](const std::string& p) { write_csv(split.train, p); });
  atomic_write(config.validation_path(),
               [&](const std::string& p) { write_csv(split.validation, p); });
}

std::vector<HyperParams> stage_train(const RunConfig& config) {
  const Dataset train = load_csv(config.train_path());
  const FoldAssignment folds =
      stratified_kfold(train, config.folds, config.stage_seed("folds"));

  std::vector<HyperParams> chosen;
  std::vector<CvScore> all_scores;
  std::vector<double> best_means;
  for (auto kind : kAllClassifierKinds) {
    const GridSpec grid = config.grid == "default" ? GridSpec::defaults(kind)
                                                  : GridSpec::coarse(kind);
    auto [best, scores] =
        grid_search(grid, train, folds, config.window, config.stage_seed("train"));
    double best_mean = 0.0;
    for (const auto& s : scores)
      if (s.params.to_json() == best.to_json()) best_mean = s.mean;
    chosen.push_back(best);
    best_means.push_back(best_mean);
    all_scores.insert(all_scores.end(), scores.begin(), scores.end());
  }

  atomic_write(config.grid_report_path(), [&](const std::string& p) {
    write_grid_report_csv(all_scores, config.folds, p);
  });
  atomic_write(config.params_path(), [&](const std::string& p) {
    nlohmann::json j;
    j["params"] = nlohmann::json::array();
    j["cv_pauc"] = nlohmann::json::array();
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      j["params"].push_back(chosen[i].to_json());
      j["cv_pauc"].push_back(best_means[i]);
    }
    std::ofstream f(p, std::ios::trunc);
    f << j.dump(1) << '\n';
  });
  return chosen;
}

void stage_tune(const RunConfig& config) {
  const Dataset train = load_csv(config.train_path());
  const std::vector<HyperParams> params = load_chosen_params(config.params_path());
  const FoldAssignment folds =
      stratified_kfold(train, config.folds, config.stage_seed("folds"));

  const ConfidenceMatrix matrix =
      build_confidence_matrix(train, folds, params, config.stage_seed("matrix"));
  atomic_write(config.matrix_path(),
               [&](const std::string& p) { write_confidence_matrix_csv(matrix, p); });

  GaConfig ga = config.ga;
  ga.seed = config.stage_seed("ga");
  auto [weights, ga_result] = tune_weights(matrix, ga, config.window);
  atomic_write(config.ga_history_path(),
               [&](const std::string& p) { write_ga_history_csv(ga_result, p); });

  EnsembleModel ensemble;
  ensemble.weights = weights;
  ensemble.window = config.window;
  const std::uint64_t fit_seed = config.stage_seed("final_fit");
  for (std::size_t i = 0; i < params.size(); ++i)
    ensemble.models.push_back(fit(params[i], train, splitmix64(fit_seed + i)));

  // natural threshold from the out-of-fold combined scores
  const std::vector<double> scores = combined_scores(matrix, weights);
  ensemble.alpha = select_threshold(scores, matrix.labels, config.threshold_criterion);

  ensemble.save(config.bundle_dir());
}

void stage_evaluate(const RunConfig& config) {
  const EnsembleModel ensemble = EnsembleModel::load(config.bundle_dir());
  const Dataset validation = load_csv(config.validation_path());
  const std::vector<int> labels = validation.labels();

  std::vector<ReportRow> rows;
  for (std::size_t c = 0; c < ensemble.models.size(); ++c) {
    const auto& model = ensemble.models[c];
    std::vector<double> scores;
    std::vector<int> preds;
    scores.reserve(validation.size());
    for (const auto& inst : validation.instances) {
      scores.push_back(model.confidence(inst.attributes));
      preds.push_back(scores.back() >= 0.5 ? 1 : -1);
    }
    const RocCurve roc = roc_curve(scores, labels);
    atomic_write(config.out_dir + "/roc_" + kind_name(model.kind()) + ".csv",
                 [&](const std::string& p) { write_roc_csv(roc, p); });
    ReportRow row;
    row.name = kind_name(model.kind());
    row.metrics = report(confusion(preds, labels));
    row.pauc = partial_auc(roc, config.window.first, config.window.second).normalized;
    rows.push_back(std::move(row));
  }

  std::vector<double> scores;
  std::vector<int> preds;
  for (const auto& inst : validation.instances) {
    scores.push_back(ensemble.score(inst.attributes));
    preds.push_back(scores.back() >= ensemble.alpha ? 1 : -1);
  }
  const RocCurve roc = roc_curve(scores, labels);
  atomic_write(config.out_dir + "/roc_multiple_classifier_system.csv",
               [&](const std::string& p) { write_roc_csv(roc, p); });
  ReportRow row;
  row.name = "multiple_classifier_system";
  row.metrics = report(confusion(preds, labels));
  row.pauc = partial_auc(roc, config.window.first, config.window.second).normalized;
  rows.push_back(std::move(row));

  atomic_write(config.report_path(),
               [&](const std::string& p) { write_report_csv(rows, p); });
}

double stage_compare(const RunConfig& config) {
  const EnsembleModel ensemble = EnsembleModel::load(config.bundle_dir());
  const Dataset validation = load_csv(config.validation_path());
  const std::vector<int> labels = validation.labels();

  std::vector<std::vector<double>> base_scores(ensemble.models.size());
  std::vector<double> ens_scores;
  for (const auto& inst : validation.instances) {
    const auto conf = ensemble.confidences(inst.attributes);
    for (std::size_t c = 0; c < conf.size(); ++c) base_scores[c].push_back(conf[c]);
    ens_scores.push_back(combined_score(conf, ensemble.weights));
  }

  std::size_t best = 0;
  double best_pauc = -1.0;
  for (std::size_t c = 0; c < base_scores.size(); ++c) {
    const double p = normalized_pauc(base_scores[c], labels, config.window);
    if (p > best_pauc) {
      best_pauc = p;
      best = c;
    }
  }
  const double ens_pauc = normalized_pauc(ens_scores, labels, config.window);
  const double p_value =
      bootstrap_pauc_test(base_scores[best], ens_scores, labels, config.window, 1000,
                          config.stage_seed("bootstrap"));

  atomic_write(config.bootstrap_path(), [&](const std::string& p) {
    nlohmann::json j;
    j["best_single"] = kind_name(ensemble.models[best].kind());
    j["best_single_pauc"] = best_pauc;
    j["ensemble_pauc"] = ens_pauc;
    j["n_boot"] = 1000;
    j["p_value"] = p_value;
    std::ofstream f(p, std::ios::trunc);
    f << j.dump(1) << '\n';
  });
  return p_value;
}

void write_manifest(const RunConfig& config) {
  atomic_write(config.manifest_path(), [&](const std::string& p) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["kernel_backend"] = std::string(kernels::active_backend());
    j["config"] = config.to_json();
    nlohmann::json seeds;
    for (const char* stage : {"generate", "split", "folds", "train", "matrix", "ga",
                              "final_fit", "bootstrap"})
      seeds[stage] = config.stage_seed(stage);
    j["stage_seeds"] = seeds;
    std::ofstream f(p, std::ios::trunc);
    f << j.dump(1) << '\n';
  });
}

int run_pipeline(const RunConfig& config) {
  const std::vector<std::pair<std::string, std::function<void()>>> stages = {
      {"generate", [&] { stage_generate(config); }},
      {"split", [&] { stage_split(config); }},
      {"train", [&] { stage_train(config); }},
      {"tune", [&] { stage_tune(config); }},
      {"evaluate", [&] { stage_evaluate(config); }},
      {"compare", [&] { stage_compare(config); }},
      {"manifest", [&] { write_manifest(config); }},
  };
  for (const auto& [name, run] : stages) {
    try {
      run();
    } catch (const std::exception& e) {
      std::cerr << "pipeline stage '" << name << "' failed: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace mcs
