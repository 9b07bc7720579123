#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mcs/pipeline.hpp"

using namespace mcs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

RunConfig tiny_config(const std::string& out_dir, std::uint64_t seed) {
  RunConfig config;
  config.synth.n_instances = 200;
  config.synth.positive_rate = 0.25;
  config.synth.class_separation = 2.5;
  config.folds = 3;
  config.grid = "coarse";
  config.ga.population_size = 30;
  config.ga.iterations = 12;
  config.out_dir = out_dir;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("RunConfig json round trip") {
  RunConfig config = tiny_config("somewhere", 99);
  config.threshold_criterion = ThresholdCriterion::Youden;
  config.window = {0.8, 0.95};
  const RunConfig back = RunConfig::from_json(config.to_json());
  CHECK(back.synth.n_instances == 200);
  CHECK(back.folds == 3);
  CHECK(back.window == config.window);
  CHECK(back.threshold_criterion == ThresholdCriterion::Youden);
  CHECK(back.out_dir == "somewhere");
  CHECK(back.seed == 99);
  CHECK(back.ga.population_size == 30);
}

TEST_CASE("stage seeds differ per stage but are stable") {
  const RunConfig config = tiny_config("x", 5);
  CHECK(config.stage_seed("split") != config.stage_seed("train"));
  CHECK(config.stage_seed("split") == config.stage_seed("split"));
  RunConfig other = config;
  other.seed = 6;
  CHECK(config.stage_seed("split") != other.stage_seed("split"));
}

TEST_CASE("full pipeline produces every artifact and a sane report") {
  const auto dir = (fs::temp_directory_path() / "mcs_pipe_a").string();
  fs::remove_all(dir);
  const RunConfig config = tiny_config(dir, 12);
  REQUIRE(run_pipeline(config) == 0);

  for (const std::string& p :
       {config.data_path(), config.train_path(), config.validation_path(),
        config.params_path(), config.grid_report_path(), config.matrix_path(),
        config.ga_history_path(), config.report_path(), config.bootstrap_path(),
        config.manifest_path(), config.bundle_dir() + "/ensemble.json"})
    CHECK(fs::exists(p));

  // report: header + five single classifiers + ensemble
  std::ifstream f(config.report_path());
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(line == "classifier,accuracy,precision,sensitivity,specificity,pauc");
  int rows = 0;
  bool has_ensemble = false;
  while (std::getline(f, line)) {
    ++rows;
    if (line.rfind("multiple_classifier_system,", 0) == 0) has_ensemble = true;
  }
  CHECK(rows == 6);
  CHECK(has_ensemble);

  // the saved bundle classifies the validation set without errors
  const EnsembleModel ens = EnsembleModel::load(config.bundle_dir());
  const Dataset validation = load_csv(config.validation_path());
  for (const auto& inst : validation.instances) {
    const int pred = ens.classify(inst.attributes);
    CHECK((pred == 1 || pred == -1));
  }

  const nlohmann::json boot = nlohmann::json::parse(slurp(config.bootstrap_path()));
  const double p = boot.at("p_value").get<double>();
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
}

TEST_CASE("identical configs give byte-identical outputs") {
  const auto dir_a = (fs::temp_directory_path() / "mcs_pipe_b1").string();
  const auto dir_b = (fs::temp_directory_path() / "mcs_pipe_b2").string();
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  RunConfig a = tiny_config(dir_a, 77);
  RunConfig b = tiny_config(dir_b, 77);
  REQUIRE(run_pipeline(a) == 0);
  REQUIRE(run_pipeline(b) == 0);

  for (const std::string& name :
       {"data.csv", "train.csv", "validation.csv", "chosen_params.json",
        "grid_report.csv", "confidence_matrix.csv", "ga_history.csv",
        "report.csv", "bootstrap.json", "ensemble/ensemble.json"})
    CHECK(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name));

  // a different seed must change the data
  const auto dir_c = (fs::temp_directory_path() / "mcs_pipe_b3").string();
  fs::remove_all(dir_c);
  RunConfig c = tiny_config(dir_c, 78);
  REQUIRE(run_pipeline(c) == 0);
  CHECK(slurp(dir_a + "/data.csv") != slurp(dir_c + "/data.csv"));
}

TEST_CASE("stages fail with a named diagnostic when inputs are missing") {
  const auto dir = (fs::temp_directory_path() / "mcs_pipe_c").string();
  fs::remove_all(dir);
  const RunConfig config = tiny_config(dir, 1);
  CHECK_THROWS(stage_tune(config));  // no train.csv yet

  RunConfig bad = config;
  bad.data_csv = dir + "/does_not_exist.csv";
  CHECK(run_pipeline(bad) != 0);
}
