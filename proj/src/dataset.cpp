#include "mcs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcs {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

bool Dataset::fully_labeled() const {
  return std::all_of(instances.begin(), instances.end(),
                     [](const Instance& i) { return i.label.has_value(); });
}

std::size_t Dataset::count_positive() const {
  return std::count_if(instances.begin(), instances.end(), [](const Instance& i) {
    return i.label && *i.label == 1;
  });
}

std::size_t Dataset::count_negative() const {
  return std::count_if(instances.begin(), instances.end(), [](const Instance& i) {
    return i.label && *i.label == -1;
  });
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    if (!inst.label)
      throw std::runtime_error("dataset contains unlabeled instance " + inst.pair_id);
    out.push_back(*inst.label);
  }
  return out;
}

void Dataset::validate() const {
  std::set<std::string> seen;
  for (const auto& inst : instances) {
    if (inst.attributes.size() != attribute_names.size())
      throw std::invalid_argument("instance " + inst.pair_id +
                                  " has wrong attribute dimension");
    for (double v : inst.attributes)
      if (!std::isfinite(v))
        throw std::invalid_argument("instance " + inst.pair_id +
                                    " has non-finite attribute");
    if (inst.label && *inst.label != 1 && *inst.label != -1)
      throw std::invalid_argument("instance " + inst.pair_id +
                                  " has label outside {-1,+1}");
    if (!seen.insert(inst.pair_id).second)
      throw std::invalid_argument("duplicate pair_id: " + inst.pair_id);
  }
}

std::vector<std::size_t> FoldAssignment::fold_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::complement_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file, header row expected");

  auto header = split_fields(line);
  if (header.size() < 3 || header.front() != "pair_id" || header.back() != "label")
    throw std::runtime_error(path + ": bad header, expected pair_id,attr_1,...,label");

  Dataset ds;
  ds.attribute_names.assign(header.begin() + 1, header.end() - 1);
  ds.provenance = path;
  const std::size_t n_attr = ds.attribute_names.size();

  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != n_attr + 2)
      throw std::runtime_error(path + ": row " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size() - 2) + " attributes, expected " +
                               std::to_string(n_attr));
    Instance inst;
    inst.pair_id = fields[0];
    if (!seen.insert(inst.pair_id).second)
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " duplicates pair_id " + inst.pair_id);
    inst.attributes.reserve(n_attr);
    for (std::size_t i = 0; i < n_attr; ++i) {
      const std::string& f = fields[i + 1];
      char* end = nullptr;
      double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v))
        throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                                 " has non-numeric attribute '" + f + "'");
      inst.attributes.push_back(v);
    }
    const std::string& lab = fields.back();
    if (lab == "1" || lab == "+1") {
      inst.label = 1;
    } else if (lab == "-1") {
      inst.label = -1;
    } else if (!lab.empty()) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                               " has label '" + lab + "', expected 1, -1 or empty");
    }
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ostringstream out;
  out << "pair_id";
  for (const auto& name : dataset.attribute_names) out << ',' << name;
  out << ",label\n";
  for (const auto& inst : dataset.instances) {
    out << inst.pair_id;
    for (double v : inst.attributes) out << ',' << format_double(v);
    out << ',';
    if (inst.label) out << *inst.label;
    out << '\n';
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << out.str();
  if (!f) throw std::runtime_error("write failed: " + path);
}

SplitPair split_train_validation(const Dataset& dataset, double fraction,
                                 std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("fraction must be in (0,1)");
  if (!dataset.fully_labeled())
    throw std::runtime_error("split requires a fully labeled dataset");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    (*dataset.instances[i].label == 1 ? pos : neg).push_back(i);

  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  const std::size_t n = dataset.size();
  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  auto n_train_pos = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pos.size())));
  n_train_pos = std::min(n_train_pos, std::min(n_train, pos.size()));
  std::size_t n_train_neg = n_train - n_train_pos;
  if (n_train_neg > neg.size()) {
    n_train_pos += n_train_neg - neg.size();
    n_train_neg = neg.size();
  }

  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train_pos; ++i) in_train[pos[i]] = true;
  for (std::size_t i = 0; i < n_train_neg; ++i) in_train[neg[i]] = true;

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? train_idx : val_idx).push_back(i);

  SplitPair out;
  out.train = subset(dataset, train_idx);
  out.validation = subset(dataset, val_idx);
  out.train.provenance = dataset.provenance + " [train]";
  out.validation.provenance = dataset.provenance + " [validation]";
  out.fraction = fraction;
  out.seed = seed;
  return out;
}

FoldAssignment stratified_kfold(const Dataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (!dataset.fully_labeled())
    throw std::runtime_error("k-fold requires a fully labeled dataset");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    (*dataset.instances[i].label == 1 ? pos : neg).push_back(i);
  if (pos.size() < static_cast<std::size_t>(k))
    throw std::runtime_error("class +1 has " + std::to_string(pos.size()) +
                             " members, fewer than k=" + std::to_string(k));
  if (neg.size() < static_cast<std::size_t>(k))
    throw std::runtime_error("class -1 has " + std::to_string(neg.size()) +
                             " members, fewer than k=" + std::to_string(k));

  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  FoldAssignment fa;
  fa.k = k;
  fa.fold_of.assign(dataset.size(), -1);
  // Deal both classes through one running counter so that per-class counts
  // and total fold sizes each stay within one of each other.
  std::size_t counter = 0;
  for (std::size_t i : pos) fa.fold_of[i] = static_cast<int>(counter++ % k);
  for (std::size_t i : neg) fa.fold_of[i] = static_cast<int>(counter++ % k);
  return fa;
}

Dataset generate_synthetic(const SynthSpec& spec) {
  if (spec.n_instances == 0) throw std::invalid_argument("n_instances must be positive");
  if (spec.positive_rate <= 0.0 || spec.positive_rate >= 1.0)
    throw std::invalid_argument("positive_rate must be in (0,1)");
  if (spec.block_names.empty() || spec.n_attr % spec.block_names.size() != 0)
    throw std::invalid_argument("n_attr must be divisible by the number of blocks");
  if (spec.class_separation < 0.0)
    throw std::invalid_argument("class_separation must be nonnegative");

  const std::size_t n_blocks = spec.block_names.size();
  const std::size_t block_size = spec.n_attr / n_blocks;

  Dataset ds;
  ds.provenance = "synthetic seed=" + std::to_string(spec.seed);
  ds.attribute_names.reserve(spec.n_attr);
  for (std::size_t b = 0; b < n_blocks; ++b)
    for (std::size_t j = 0; j < block_size; ++j)
      ds.attribute_names.push_back(spec.block_names[b] + "_" + std::to_string(j + 1));

  const auto n_pos = static_cast<std::size_t>(
      std::llround(spec.positive_rate * static_cast<double>(spec.n_instances)));
  std::vector<int> labels(spec.n_instances, -1);
  std::fill(labels.begin(), labels.begin() + n_pos, 1);

  std::mt19937_64 rng(spec.seed);
  std::shuffle(labels.begin(), labels.end(), rng);

  // Positives are shifted per attribute in every block except the last,
  // which stays at zero shift so the classifiers see an uninformative
  // subspace and disagree.
  const double shift = spec.class_separation / std::sqrt(static_cast<double>(spec.n_attr));
  std::normal_distribution<double> gauss(0.0, 1.0);

  ds.instances.reserve(spec.n_instances);
  for (std::size_t i = 0; i < spec.n_instances; ++i) {
    Instance inst;
    inst.pair_id = "pair_" + std::to_string(i + 1);
    inst.label = labels[i];
    inst.attributes.reserve(spec.n_attr);
    for (std::size_t a = 0; a < spec.n_attr; ++a) {
      const std::size_t block = a / block_size;
      double v = gauss(rng);
      if (labels[i] == 1 && block + 1 < n_blocks) v += shift;
      inst.attributes.push_back(v);
    }
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.attribute_names = dataset.attribute_names;
  out.provenance = dataset.provenance;
  out.instances.reserve(indices.size());
  for (std::size_t i : indices) out.instances.push_back(dataset.instances.at(i));
  return out;
}

}  // namespace mcs
