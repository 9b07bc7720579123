#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fitted_state.hpp"

namespace mcs::detail {

namespace {

constexpr int kMinNodeSize = 5;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Flat binary tree; leaves have attr == -1 and vote in {-1,+1}.
struct Node {
  int attr = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int vote = 0;
};

struct Tree {
  std::vector<Node> nodes;

  int vote(std::span<const double> z) const {
    int i = 0;
    while (nodes[i].attr >= 0)
      i = z[nodes[i].attr] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].vote;
  }
};

struct TreeBuilder {
  const TrainView& train;
  int mtry;
  std::mt19937_64& rng;
  Tree tree;
  std::vector<int> attr_pool;

  TreeBuilder(const TrainView& t, int m, std::mt19937_64& r)
      : train(t), mtry(m), rng(r), attr_pool(t.n_attr) {
    std::iota(attr_pool.begin(), attr_pool.end(), 0);
  }

  int make_leaf(long n_pos, long n_total) {
    Node leaf;
    leaf.vote = 2 * n_pos > n_total ? 1 : -1;
    tree.nodes.push_back(leaf);
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  // indices is the bootstrap sample slice owned by this node
  int build(std::span<std::size_t> indices) {
    const long n = static_cast<long>(indices.size());
    long n_pos = 0;
    for (std::size_t i : indices)
      if (train.labels[i] == 1) ++n_pos;
    if (n_pos == 0 || n_pos == n || n <= kMinNodeSize)
      return make_leaf(n_pos, n);

    // sample mtry attributes without replacement
    for (int i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(attr_pool.size()) - 1);
      std::swap(attr_pool[i], attr_pool[pick(rng)]);
    }

    const double parent_metric =
        static_cast<double>(n_pos) * (n - n_pos) / static_cast<double>(n);
    int best_attr = -1;
    double best_threshold = 0.0;
    // minimize the summed child Gini (scaled); parent value is the no-split bound
    double best_metric = parent_metric;

    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    for (int ai = 0; ai < mtry; ++ai) {
      const int attr = attr_pool[ai];
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return train.values[a * train.n_attr + attr] < train.values[b * train.n_attr + attr];
      });
      long left_pos = 0;
      for (long i = 0; i < n - 1; ++i) {
        if (train.labels[sorted[i]] == 1) ++left_pos;
        const double v0 = train.values[sorted[i] * train.n_attr + attr];
        const double v1 = train.values[sorted[i + 1] * train.n_attr + attr];
        if (v0 == v1) continue;
        const long nl = i + 1;
        const long nr = n - nl;
        const long right_pos = n_pos - left_pos;
        const double metric =
            static_cast<double>(left_pos) * (nl - left_pos) / static_cast<double>(nl) +
            static_cast<double>(right_pos) * (nr - right_pos) / static_cast<double>(nr);
        if (metric < best_metric - 1e-12) {
          best_metric = metric;
          best_attr = attr;
          best_threshold = (v0 + v1) / 2.0;
        }
      }
    }
    if (best_attr < 0) return make_leaf(n_pos, n);

    auto mid = std::partition(indices.begin(), indices.end(), [&](std::size_t i) {
      return train.values[i * train.n_attr + best_attr] < best_threshold;
    });
    const auto n_left = static_cast<std::size_t>(mid - indices.begin());
    if (n_left == 0 || n_left == indices.size()) return make_leaf(n_pos, n);

    Node node;
    node.attr = best_attr;
    node.threshold = best_threshold;
    tree.nodes.push_back(node);
    const int self = static_cast<int>(tree.nodes.size()) - 1;
    tree.nodes[self].left = build(indices.subspan(0, n_left));
    tree.nodes[self].right = build(indices.subspan(n_left));
    return self;
  }
};

class RandomForestState final : public FittedState {
 public:
  std::vector<Tree> trees;

  double confidence(std::span<const double> z) const override {
    long votes = 0;
    for (const auto& t : trees)
      if (t.vote(z) == 1) ++votes;
    return static_cast<double>(votes) / static_cast<double>(trees.size());
  }

  nlohmann::json state_json() const override {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : trees) {
      nlohmann::json attrs = nlohmann::json::array();
      nlohmann::json thresholds = nlohmann::json::array();
      nlohmann::json lefts = nlohmann::json::array();
      nlohmann::json rights = nlohmann::json::array();
      nlohmann::json votes = nlohmann::json::array();
      for (const auto& nd : t.nodes) {
        attrs.push_back(nd.attr);
        thresholds.push_back(nd.threshold);
        lefts.push_back(nd.left);
        rights.push_back(nd.right);
        votes.push_back(nd.vote);
      }
      out.push_back({{"attr", attrs},
                     {"threshold", thresholds},
                     {"left", lefts},
                     {"right", rights},
                     {"vote", votes}});
    }
    return {{"trees", out}};
  }
};

}  // namespace

StatePtr fit_random_forest(const RandomForestParams& p, const TrainView& train,
                           std::uint64_t seed) {
  if (p.mtry < 1 || p.mtry > static_cast<int>(train.n_attr))
    throw std::invalid_argument("mtry outside [1, n_attr]");
  if (p.n_trees < 1) throw std::invalid_argument("n_trees must be positive");

  auto state = std::make_shared<RandomForestState>();
  state->trees.reserve(p.n_trees);
  std::uniform_int_distribution<std::size_t> pick(0, train.n_rows - 1);
  std::vector<std::size_t> sample(train.n_rows);
  for (int t = 0; t < p.n_trees; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ (0x5F0Eull + static_cast<std::uint64_t>(t))));
    for (auto& s : sample) s = pick(rng);
    TreeBuilder builder(train, p.mtry, rng);
    builder.build(sample);
    state->trees.push_back(std::move(builder.tree));
  }
  return state;
}

StatePtr random_forest_from_json(const nlohmann::json& j) {
  auto state = std::make_shared<RandomForestState>();
  for (const auto& tj : j.at("trees")) {
    Tree t;
    const auto& attrs = tj.at("attr");
    const auto& thresholds = tj.at("threshold");
    const auto& lefts = tj.at("left");
    const auto& rights = tj.at("right");
    const auto& votes = tj.at("vote");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      Node nd;
      nd.attr = attrs[i].get<int>();
      nd.threshold = thresholds[i].get<double>();
      nd.left = lefts[i].get<int>();
      nd.right = rights[i].get<int>();
      nd.vote = votes[i].get<int>();
      t.nodes.push_back(nd);
    }
    state->trees.push_back(std::move(t));
  }
  return state;
}

}  // namespace mcs::detail
