#include <cmath>
#include <stdexcept>
#include <vector>

#include "fitted_state.hpp"
#include "mcs/kernels.hpp"

namespace mcs::detail {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kGradTolerance = 1e-6;

class LogisticState final : public FittedState {
 public:
  std::vector<double> weights;
  double intercept = 0.0;

  double confidence(std::span<const double> z) const override {
    const double f = kernels::dot(weights, z) + intercept;
    return 1.0 / (1.0 + std::exp(-f));
  }

  nlohmann::json state_json() const override {
    return {{"weights", weights}, {"intercept", intercept}};
  }
};

}  // namespace

// Full-batch gradient descent with backtracking line search on the mean
// penalized log loss; the intercept is not penalized.
StatePtr fit_logistic(const LogisticParams& p, const TrainView& train) {
  if (p.decay < 0.0) throw std::invalid_argument("decay must be nonnegative");

  const std::size_t n = train.n_rows;
  const std::size_t d = train.n_attr;
  const double lambda = p.decay / static_cast<double>(n);

  std::vector<double> w(d, 0.0);
  double b = 0.0;

  auto objective = [&](const std::vector<double>& ww, double bb) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = train.labels[i] * (kernels::dot(ww, train.row(i)) + bb);
      loss += m >= 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    loss /= static_cast<double>(n);
    loss += 0.5 * lambda * kernels::dot(ww, ww);
    return loss;
  };

  std::vector<double> grad_w(d);
  double grad_b = 0.0;
  auto gradient = [&]() {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = train.labels[i] * (kernels::dot(w, train.row(i)) + b);
      const double s = m >= 0 ? std::exp(-m) / (1.0 + std::exp(-m))
                              : 1.0 / (1.0 + std::exp(m));
      const double coef = -train.labels[i] * s / static_cast<double>(n);
      kernels::axpy(coef, train.row(i), grad_w);
      grad_b += coef;
    }
    kernels::axpy(lambda, w, grad_w);
  };

  double obj = objective(w, b);
  double step = 1.0;
  std::vector<double> w_try(d);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    gradient();
    const double g2 = kernels::dot(grad_w, grad_w) + grad_b * grad_b;
    if (std::sqrt(g2) < kGradTolerance) {
      auto state = std::make_shared<LogisticState>();
      state->weights = std::move(w);
      state->intercept = b;
      return state;
    }
    // backtracking line search, warm-started from the previous step size
    step = std::min(step * 2.0, 1e4);
    bool moved = false;
    while (step > 1e-16) {
      for (std::size_t a = 0; a < d; ++a) w_try[a] = w[a] - step * grad_w[a];
      const double b_try = b - step * grad_b;
      const double cand = objective(w_try, b_try);
      if (cand <= obj - 0.5 * step * g2) {
        // stop when the objective stalls to numerical resolution
        const bool stalled = obj - cand <= 1e-12 * std::max(1.0, std::abs(obj));
        w.swap(w_try);
        b = b_try;
        obj = cand;
        moved = true;
        if (stalled) {
          auto state = std::make_shared<LogisticState>();
          state->weights = std::move(w);
          state->intercept = b;
          return state;
        }
        break;
      }
      step /= 2.0;
    }
    if (!moved) {  // no descent step representable; gradient is numerically flat
      auto state = std::make_shared<LogisticState>();
      state->weights = std::move(w);
      state->intercept = b;
      return state;
    }
  }
  throw std::runtime_error(
      "logistic regression gradient descent did not converge within " +
      std::to_string(kMaxIterations) + " iterations");
}

StatePtr logistic_from_json(const nlohmann::json& j) {
  auto state = std::make_shared<LogisticState>();
  state->weights = j.at("weights").get<std::vector<double>>();
  state->intercept = j.at("intercept").get<double>();
  return state;
}

}  // namespace mcs::detail
