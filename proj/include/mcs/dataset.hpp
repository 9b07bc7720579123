#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcs {

/// One drug-medical event pair: an attribute vector with an optional
/// class label in {-1,+1}.
struct Instance {
  std::string pair_id;
  std::vector<double> attributes;
  std::optional<int> label;  // -1 or +1 when present
};

struct Dataset {
  std::vector<Instance> instances;
  std::vector<std::string> attribute_names;
  std::string provenance;

  std::size_t size() const { return instances.size(); }
  std::size_t n_attr() const { return attribute_names.size(); }
  bool fully_labeled() const;
  /// Counts of +1 / -1 labels among labeled instances.
  std::size_t count_positive() const;
  std::size_t count_negative() const;
  /// Labels as a vector, throws if any instance is unlabeled.
  std::vector<int> labels() const;
  /// Throws std::invalid_argument if any invariant is broken
  /// (dimension mismatch, duplicate pair_id, bad label, non-finite value).
  void validate() const;
};

struct SplitPair {
  Dataset train;
  Dataset validation;
  double fraction;
  std::uint64_t seed;
};

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;  // instance index -> fold in [0,k)

  std::vector<std::size_t> fold_indices(int fold) const;
  std::vector<std::size_t> complement_indices(int fold) const;
};

/// Synthetic data generator control. Attributes are organized in equal
/// blocks named after causality criteria; one block carries no class
/// signal so the classifiers disagree in interesting ways.
struct SynthSpec {
  std::size_t n_instances = 1000;
  double positive_rate = 0.10;
  std::size_t n_attr = 30;
  std::vector<std::string> block_names = {
      "association_strength", "temporality", "specificity",
      "biological_gradient", "experimentation"};
  double class_separation = 2.0;
  std::uint64_t seed = 0;
};

/// CSV schema: header `pair_id,attr_1,...,attr_N,label`; label column is
/// "1", "-1" or empty (unlabeled).
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& dataset, const std::string& path);

/// Stratified train/validation split: |train| = round(fraction*N), the
/// positive rate of each part within one instance of the global rate,
/// deterministic given seed. Requires a fully labeled dataset.
SplitPair split_train_validation(const Dataset& dataset, double fraction,
                                 std::uint64_t seed);

/// Stratified k-fold assignment; fold sizes and per-fold positive counts
/// each differ by at most one. Requires >= k members of each class.
FoldAssignment stratified_kfold(const Dataset& dataset, int k,
                                std::uint64_t seed);

Dataset generate_synthetic(const SynthSpec& spec);

/// Restrict a dataset to the given instance indices (order preserved).
Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices);

}  // namespace mcs
