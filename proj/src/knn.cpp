#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fitted_state.hpp"
#include "mcs/kernels.hpp"

namespace mcs::detail {

namespace {

class KNearestState final : public FittedState {
 public:
  int k = 1;
  std::vector<std::vector<double>> points;  // standardized
  std::vector<int> labels;

  double confidence(std::span<const double> z) const override {
    const std::size_t n = points.size();
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i)
      dist[i] = kernels::squared_distance(points[i], z);

    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + (kk - 1), sorted.end());
    const double boundary = sorted[kk - 1];

    // all points at the boundary distance are included and the count
    // renormalized, which keeps the result independent of storage order
    long included = 0, positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] <= boundary) {
        ++included;
        if (labels[i] == 1) ++positive;
      }
    }
    return static_cast<double>(positive) / static_cast<double>(included);
  }

  nlohmann::json state_json() const override {
    return {{"k", k}, {"points", points}, {"labels", labels}};
  }
};

}  // namespace

StatePtr fit_k_nearest(const KNearestParams& p, const TrainView& train) {
  if (p.k < 1) throw std::invalid_argument("k must be >= 1");
  auto state = std::make_shared<KNearestState>();
  state->k = p.k;
  state->labels = train.labels;
  state->points.reserve(train.n_rows);
  for (std::size_t i = 0; i < train.n_rows; ++i)
    state->points.emplace_back(train.row(i).begin(), train.row(i).end());
  return state;
}

StatePtr k_nearest_from_json(const nlohmann::json& j) {
  auto state = std::make_shared<KNearestState>();
  state->k = j.at("k").get<int>();
  state->points = j.at("points").get<std::vector<std::vector<double>>>();
  state->labels = j.at("labels").get<std::vector<int>>();
  return state;
}

}  // namespace mcs::detail
