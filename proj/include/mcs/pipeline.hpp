#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "json.hpp"
#include "mcs/dataset.hpp"
#include "mcs/ensemble.hpp"
#include "mcs/ga.hpp"
#include "mcs/model_selection.hpp"

namespace mcs {

/// Everything a full run needs. All stage seeds derive from the one
/// master seed, so a config determines the run byte for byte.
struct RunConfig {
  std::string data_csv;  // empty -> use the synthetic generator
  SynthSpec synth;
  double split_fraction = 0.8;
  int folds = 10;
  std::pair<double, double> window{0.9, 1.0};
  std::string grid = "coarse";  // "coarse" or "default" grid densities
  GaConfig ga;
  ThresholdCriterion threshold_criterion = ThresholdCriterion::Accuracy;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);

  std::uint64_t stage_seed(const std::string& stage) const;

  // file layout inside out_dir
  std::string data_path() const { return out_dir + "/data.csv"; }
  std::string train_path() const { return out_dir + "/train.csv"; }
  std::string validation_path() const { return out_dir + "/validation.csv"; }
  std::string params_path() const { return out_dir + "/chosen_params.json"; }
  std::string grid_report_path() const { return out_dir + "/grid_report.csv"; }
  std::string matrix_path() const { return out_dir + "/confidence_matrix.csv"; }
  std::string bundle_dir() const { return out_dir + "/ensemble"; }
  std::string ga_history_path() const { return out_dir + "/ga_history.csv"; }
  std::string report_path() const { return out_dir + "/report.csv"; }
  std::string bootstrap_path() const { return out_dir + "/bootstrap.json"; }
  std::string manifest_path() const { return out_dir + "/manifest.json"; }
};

// Stages; each reads its inputs from the files of earlier stages so they
// can be rerun independently.
void stage_generate(const RunConfig& config);
void stage_split(const RunConfig& config);
std::vector<HyperParams> stage_train(const RunConfig& config);
void stage_tune(const RunConfig& config);
void stage_evaluate(const RunConfig& config);
double stage_compare(const RunConfig& config);
void write_manifest(const RunConfig& config);

/// Runs every stage; returns 0 on success, nonzero with a stage-named
/// diagnostic on stderr otherwise. Partial outputs are retained.
int run_pipeline(const RunConfig& config);

}  // namespace mcs
