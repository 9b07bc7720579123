// Command-line driver for the weighted multiple classifier system toolkit.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mcs/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string data_csv;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int folds = 0;
  std::string window;
  std::string threshold_criterion;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--data", flags.data_csv, "input dataset CSV (omit to use synthetic data)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed; all stage seeds derive from it")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--folds", flags.folds, "number of cross-validation folds");
  cmd->add_option("--window", flags.window, "pAUC specificity window as lo,hi");
  cmd->add_option("--threshold-criterion", flags.threshold_criterion,
                  "natural threshold criterion: accuracy or youden");
}

mcs::RunConfig build_config(const CommonFlags& flags) {
  mcs::RunConfig config;
  if (!flags.config_path.empty()) config = mcs::RunConfig::load(flags.config_path);
  if (!flags.data_csv.empty()) config.data_csv = flags.data_csv;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.seed_set) config.seed = flags.seed;
  if (flags.folds > 0) config.folds = flags.folds;
  if (!flags.window.empty()) {
    const auto comma = flags.window.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--window expects lo,hi");
    config.window = {std::stod(flags.window.substr(0, comma)),
                     std::stod(flags.window.substr(comma + 1))};
  }
  if (!flags.threshold_criterion.empty())
    config.threshold_criterion =
        mcs::threshold_criterion_from_name(flags.threshold_criterion);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GA-tuned multiple classifier system for binary classification"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* generate = app.add_subcommand("generate", "write the dataset (synthetic or copied) to out/data.csv");
  auto* split = app.add_subcommand("split", "stratified train/validation split");
  auto* train = app.add_subcommand("train", "grid-search the five base classifiers");
  auto* tune = app.add_subcommand("tune", "GA weight tuning and natural threshold selection");
  auto* evaluate = app.add_subcommand("evaluate", "score the ensemble and base classifiers on validation data");
  auto* compare = app.add_subcommand("compare", "bootstrap test: best single classifier vs ensemble");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage end to end");
  for (auto* cmd : {generate, split, train, tune, evaluate, compare, pipeline})
    add_common(cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const mcs::RunConfig config = build_config(flags);
    if (pipeline->parsed()) return mcs::run_pipeline(config);
    if (generate->parsed()) {
      mcs::stage_generate(config);
    } else if (split->parsed()) {
      mcs::stage_split(config);
    } else if (train->parsed()) {
      mcs::stage_train(config);
    } else if (tune->parsed()) {
      mcs::stage_tune(config);
    } else if (evaluate->parsed()) {
      mcs::stage_evaluate(config);
    } else if (compare->parsed()) {
      const double p = mcs::stage_compare(config);
      std::cout << "bootstrap p-value: " << p << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
