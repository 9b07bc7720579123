#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fitted_state.hpp"
#include "mcs/kernels.hpp"

namespace mcs::detail {

namespace {

constexpr double kKktTolerance = 1e-3;
constexpr long kMaxSmoIterations = 2000000;

class SvmState final : public FittedState {
 public:
  double sigma = 0.1;
  double bias = 0.0;
  // Platt sigmoid: P(+1|x) = 1 / (1 + exp(A*d + B))
  double platt_a = -1.0;
  double platt_b = 0.0;
  std::vector<std::vector<double>> support_vectors;  // standardized
  std::vector<double> coefficients;                  // alpha_i * y_i

  double decision(std::span<const double> z) const {
    double d = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
      d += coefficients[i] *
           std::exp(-sigma * kernels::squared_distance(support_vectors[i], z));
    return d;
  }

  double confidence(std::span<const double> z) const override {
    return 1.0 / (1.0 + std::exp(platt_a * decision(z) + platt_b));
  }

  nlohmann::json state_json() const override {
    return {{"sigma", sigma},
            {"bias", bias},
            {"platt_a", platt_a},
            {"platt_b", platt_b},
            {"support_vectors", support_vectors},
            {"coefficients", coefficients}};
  }
};

// Platt's probabilistic output fit (Lin/Weng/Keerthi variant) on training
// decision values.
void fit_platt(const std::vector<double>& decisions, const std::vector<int>& labels,
               double& A, double& B) {
  const std::size_t n = decisions.size();
  double prior1 = 0.0;
  for (int y : labels)
    if (y == 1) prior1 += 1.0;
  const double prior0 = static_cast<double>(n) - prior1;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);

  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] == 1 ? hi : lo;

  double a = 0.0, b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto objective = [&](double aa, double bb) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = aa * decisions[i] + bb;
      // stable log(1+exp)
      if (f >= 0)
        obj += target[i] * f + std::log1p(std::exp(-f));
      else
        obj += (target[i] - 1.0) * f + std::log1p(std::exp(f));
    }
    return obj;
  };

  double obj = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = a * decisions[i] + b;
      const double p = f >= 0 ? std::exp(-f) / (1.0 + std::exp(-f))
                              : 1.0 / (1.0 + std::exp(f));
      const double q = 1.0 - p;
      const double w = p * q;
      h11 += decisions[i] * decisions[i] * w;
      h22 += w;
      h21 += decisions[i] * w;
      const double d = target[i] - p;
      g1 += decisions[i] * d;
      g2 += d;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double cand = objective(a + step * da, b + step * db);
      if (cand < obj + 1e-4 * step * gd) {
        a += step * da;
        b += step * db;
        obj = cand;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;
  }
  A = a;
  B = b;
}

}  // namespace

StatePtr fit_svm_radial(const SvmRadialParams& p, const TrainView& train) {
  if (p.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (p.c <= 0.0) throw std::invalid_argument("C must be positive");

  const std::size_t n = train.n_rows;
  const auto& y = train.labels;

  // full kernel cache in float; n stays in the low thousands here
  std::vector<float> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel[i * n + i] = 1.0f;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto v = static_cast<float>(
          std::exp(-p.sigma * kernels::squared_distance(train.row(i), train.row(j))));
      kernel[i * n + j] = v;
      kernel[j * n + i] = v;
    }
  }

  // SMO with maximal-violating-pair working set selection
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // dual gradient of 0.5 a'Qa - e'a

  long iter = 0;
  for (;; ++iter) {
    if (iter >= kMaxSmoIterations)
      throw std::runtime_error("SMO solver did not converge within " +
                               std::to_string(kMaxSmoIterations) + " iterations");
    // i: argmax -y_i grad_i over I_up, j: argmin over I_low
    int i = -1, j = -1;
    double max_up = -std::numeric_limits<double>::infinity();
    double min_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool up = (y[t] == 1 && alpha[t] < p.c) || (y[t] == -1 && alpha[t] > 0.0);
      const bool low = (y[t] == -1 && alpha[t] < p.c) || (y[t] == 1 && alpha[t] > 0.0);
      if (up && v > max_up) {
        max_up = v;
        i = static_cast<int>(t);
      }
      if (low && v < min_low) {
        min_low = v;
        j = static_cast<int>(t);
      }
    }
    if (i < 0 || j < 0 || max_up - min_low < kKktTolerance) break;

    const double qii = kernel[static_cast<std::size_t>(i) * n + i];
    const double qjj = kernel[static_cast<std::size_t>(j) * n + j];
    const double qij = kernel[static_cast<std::size_t>(i) * n + j];
    double quad = qii + qjj - 2.0 * qij;
    if (quad <= 0.0) quad = 1e-12;

    const double old_ai = alpha[i], old_aj = alpha[j];
    double delta = (max_up - min_low) / quad;
    // move along the equality-constrained direction, clipped to the box
    if (y[i] == 1)
      delta = std::min(delta, p.c - alpha[i]);
    else
      delta = std::min(delta, alpha[i]);
    if (y[j] == 1)
      delta = std::min(delta, alpha[j]);
    else
      delta = std::min(delta, p.c - alpha[j]);
    alpha[i] = old_ai + (y[i] == 1 ? delta : -delta);
    alpha[j] = old_aj + (y[j] == 1 ? -delta : delta);

    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    const float* ki = kernel.data() + static_cast<std::size_t>(i) * n;
    const float* kj = kernel.data() + static_cast<std::size_t>(j) * n;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y[t] * (y[i] * di * ki[t] + y[j] * dj * kj[t]);
  }

  // bias from the violating-pair bounds at the solution
  double sum_free = 0.0;
  long n_free = 0;
  double up_bound = -std::numeric_limits<double>::infinity();
  double low_bound = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -y[t] * grad[t];
    if (alpha[t] > 0.0 && alpha[t] < p.c) {
      sum_free += v;
      ++n_free;
    }
    const bool up = (y[t] == 1 && alpha[t] < p.c) || (y[t] == -1 && alpha[t] > 0.0);
    const bool low = (y[t] == -1 && alpha[t] < p.c) || (y[t] == 1 && alpha[t] > 0.0);
    if (up) up_bound = std::max(up_bound, v);
    if (low) low_bound = std::min(low_bound, v);
  }
  const double bias = n_free > 0 ? sum_free / static_cast<double>(n_free)
                                 : (up_bound + low_bound) / 2.0;

  auto state = std::make_shared<SvmState>();
  state->sigma = p.sigma;
  state->bias = bias;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      state->support_vectors.emplace_back(train.row(t).begin(), train.row(t).end());
      state->coefficients.push_back(alpha[t] * y[t]);
    }
  }

  // calibrate on training decision values (computed from the kernel cache)
  std::vector<double> decisions(n);
  for (std::size_t t = 0; t < n; ++t) {
    double d = bias;
    const float* kt = kernel.data() + t * n;
    for (std::size_t s = 0; s < n; ++s)
      if (alpha[s] > 1e-12) d += alpha[s] * y[s] * kt[s];
    decisions[t] = d;
  }
  fit_platt(decisions, train.labels, state->platt_a, state->platt_b);
  return state;
}

StatePtr svm_radial_from_json(const nlohmann::json& j) {
  auto state = std::make_shared<SvmState>();
  state->sigma = j.at("sigma").get<double>();
  state->bias = j.at("bias").get<double>();
  state->platt_a = j.at("platt_a").get<double>();
  state->platt_b = j.at("platt_b").get<double>();
  state->support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  state->coefficients = j.at("coefficients").get<std::vector<double>>();
  return state;
}

}  // namespace mcs::detail
