#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fitted_state.hpp"

namespace mcs::detail {

namespace {

constexpr double kVarianceFloor = 1e-9;

double silverman_bandwidth(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 1.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double sd = std::sqrt(std::max(var, kVarianceFloor));

  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < n ? values[lo] * (1.0 - frac) + values[lo + 1] * frac : values[lo];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(h, 1e-6);
}

// Per-class attribute models: plain Gaussian, or a Gaussian kernel
// density over the stored class sample with Silverman bandwidth.
class NaiveBayesState final : public FittedState {
 public:
  bool use_kernel = false;
  double log_prior_pos = 0.0;
  double log_prior_neg = 0.0;
  // Gaussian mode
  std::vector<double> mean_pos, var_pos, mean_neg, var_neg;
  // kernel mode: samples[class][attr] -> values, bandwidths likewise
  std::vector<std::vector<double>> samples_pos, samples_neg;
  std::vector<double> bandwidth_pos, bandwidth_neg;

  static double log_gauss(double x, double mu, double var) {
    const double d = x - mu;
    return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
  }

  static double log_kde(double x, const std::vector<double>& sample, double h) {
    // log of the average kernel value, computed stably
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double u = (x - sample[i]) / h;
      terms[i] = -0.5 * u * u;
      max_term = std::max(max_term, terms[i]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc) - std::log(static_cast<double>(sample.size())) -
           std::log(h) - 0.5 * std::log(2.0 * M_PI);
  }

  double confidence(std::span<const double> z) const override {
    double lp = log_prior_pos;
    double ln = log_prior_neg;
    for (std::size_t a = 0; a < z.size(); ++a) {
      if (use_kernel) {
        lp += log_kde(z[a], samples_pos[a], bandwidth_pos[a]);
        ln += log_kde(z[a], samples_neg[a], bandwidth_neg[a]);
      } else {
        lp += log_gauss(z[a], mean_pos[a], var_pos[a]);
        ln += log_gauss(z[a], mean_neg[a], var_neg[a]);
      }
    }
    // posterior P(+1|z) via log-sum-exp
    const double m = std::max(lp, ln);
    return std::exp(lp - m) / (std::exp(lp - m) + std::exp(ln - m));
  }

  nlohmann::json state_json() const override {
    nlohmann::json j;
    j["use_kernel"] = use_kernel;
    j["log_prior_pos"] = log_prior_pos;
    j["log_prior_neg"] = log_prior_neg;
    if (use_kernel) {
      j["samples_pos"] = samples_pos;
      j["samples_neg"] = samples_neg;
      j["bandwidth_pos"] = bandwidth_pos;
      j["bandwidth_neg"] = bandwidth_neg;
    } else {
      j["mean_pos"] = mean_pos;
      j["var_pos"] = var_pos;
      j["mean_neg"] = mean_neg;
      j["var_neg"] = var_neg;
    }
    return j;
  }
};

void gaussian_stats(const std::vector<std::vector<double>>& cols,
                    std::vector<double>& mean, std::vector<double>& var) {
  mean.resize(cols.size());
  var.resize(cols.size());
  for (std::size_t a = 0; a < cols.size(); ++a) {
    const auto& v = cols[a];
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    s = v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0;
    mean[a] = m;
    var[a] = std::max(s, kVarianceFloor);
  }
}

}  // namespace

StatePtr fit_naive_bayes(const NaiveBayesParams& p, const TrainView& train) {
  if (p.fl < 0.0) throw std::invalid_argument("fL must be nonnegative");

  auto state = std::make_shared<NaiveBayesState>();
  state->use_kernel = p.use_kernel;

  long n_pos = 0;
  for (int y : train.labels)
    if (y == 1) ++n_pos;
  const long n_neg = static_cast<long>(train.n_rows) - n_pos;
  // fL as additive smoothing on the class priors
  state->log_prior_pos = std::log((static_cast<double>(n_pos) + p.fl) /
                                  (static_cast<double>(train.n_rows) + 2.0 * p.fl));
  state->log_prior_neg = std::log((static_cast<double>(n_neg) + p.fl) /
                                  (static_cast<double>(train.n_rows) + 2.0 * p.fl));

  std::vector<std::vector<double>> cols_pos(train.n_attr), cols_neg(train.n_attr);
  for (std::size_t i = 0; i < train.n_rows; ++i) {
    auto& cols = train.labels[i] == 1 ? cols_pos : cols_neg;
    const auto row = train.row(i);
    for (std::size_t a = 0; a < train.n_attr; ++a) cols[a].push_back(row[a]);
  }

  if (p.use_kernel) {
    state->samples_pos = cols_pos;
    state->samples_neg = cols_neg;
    state->bandwidth_pos.reserve(train.n_attr);
    state->bandwidth_neg.reserve(train.n_attr);
    for (std::size_t a = 0; a < train.n_attr; ++a) {
      state->bandwidth_pos.push_back(silverman_bandwidth(cols_pos[a]));
      state->bandwidth_neg.push_back(silverman_bandwidth(cols_neg[a]));
    }
  } else {
    gaussian_stats(cols_pos, state->mean_pos, state->var_pos);
    gaussian_stats(cols_neg, state->mean_neg, state->var_neg);
  }
  return state;
}

StatePtr naive_bayes_from_json(const nlohmann::json& j) {
  auto state = std::make_shared<NaiveBayesState>();
  state->use_kernel = j.at("use_kernel").get<bool>();
  state->log_prior_pos = j.at("log_prior_pos").get<double>();
  state->log_prior_neg = j.at("log_prior_neg").get<double>();
  if (state->use_kernel) {
    state->samples_pos = j.at("samples_pos").get<std::vector<std::vector<double>>>();
    state->samples_neg = j.at("samples_neg").get<std::vector<std::vector<double>>>();
    state->bandwidth_pos = j.at("bandwidth_pos").get<std::vector<double>>();
    state->bandwidth_neg = j.at("bandwidth_neg").get<std::vector<double>>();
  } else {
    state->mean_pos = j.at("mean_pos").get<std::vector<double>>();
    state->var_pos = j.at("var_pos").get<std::vector<double>>();
    state->mean_neg = j.at("mean_neg").get<std::vector<double>>();
    state->var_neg = j.at("var_neg").get<std::vector<double>>();
  }
  return state;
}

}  // namespace mcs::detail
