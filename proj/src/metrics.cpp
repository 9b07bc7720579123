#include "mcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mcs {

namespace {

void check_labels(std::span<const int> labels) {
  for (int y : labels)
    if (y != 1 && y != -1) throw std::invalid_argument("labels must be -1 or +1");
}

}  // namespace

ConfusionCounts confusion(std::span<const int> predictions,
                          std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("predictions and labels differ in length");
  if (predictions.empty()) throw std::invalid_argument("empty input");
  check_labels(labels);
  check_labels(predictions);
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      (predictions[i] == 1 ? c.tp : c.fn)++;
    else
      (predictions[i] == 1 ? c.fp : c.tn)++;
  }
  return c;
}

MetricReport report(const ConfusionCounts& c) {
  MetricReport r;
  if (c.tp + c.fn > 0)
    r.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.tn + c.fp > 0)
    r.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  if (c.total() > 0)
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0)
    r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  return r;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels differ in length");
  check_labels(labels);
  const long n_pos = std::count(labels.begin(), labels.end(), 1);
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc_curve requires both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());

  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    // consume the whole tie group so equal scores form one diagonal step
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
    curve.thresholds.push_back(s);
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]) / 2.0;
  return area;
}

PaucValue partial_auc(const RocCurve& curve, double spec_lo, double spec_hi) {
  if (!(0.0 <= spec_lo && spec_lo < spec_hi && spec_hi <= 1.0))
    throw std::invalid_argument("invalid specificity window");
  // specificity s corresponds to fpr = 1 - s; the window maps to
  // fpr in [1-spec_hi, 1-spec_lo]
  const double f_lo = 1.0 - spec_hi;
  const double f_hi = 1.0 - spec_lo;

  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    double x0 = curve.fpr[i - 1], x1 = curve.fpr[i];
    double y0 = curve.tpr[i - 1], y1 = curve.tpr[i];
    if (x1 <= f_lo || x0 >= f_hi) continue;
    if (x1 == x0) continue;  // vertical segment, no width
    const double slope = (y1 - y0) / (x1 - x0);
    const double a = std::max(x0, f_lo);
    const double b = std::min(x1, f_hi);
    const double ya = y0 + slope * (a - x0);
    const double yb = y0 + slope * (b - x0);
    area += (b - a) * (ya + yb) / 2.0;
  }

  PaucValue out;
  out.raw_area = area;
  out.spec_lo = spec_lo;
  out.spec_hi = spec_hi;
  out.normalized = area / (spec_hi - spec_lo);
  return out;
}

double normalized_pauc(std::span<const double> scores, std::span<const int> labels,
                       std::pair<double, double> window) {
  return partial_auc(roc_curve(scores, labels), window.first, window.second).normalized;
}

double bootstrap_pauc_test(std::span<const double> scores_a,
                           std::span<const double> scores_b,
                           std::span<const int> labels,
                           std::pair<double, double> window, int n_boot,
                           std::uint64_t seed) {
  if (scores_a.size() != labels.size() || scores_b.size() != labels.size())
    throw std::invalid_argument("score/label length mismatch");
  if (n_boot < 100) throw std::invalid_argument("n_boot must be >= 100");
  check_labels(labels);

  const std::size_t n = labels.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<double> ra(n), rb(n);
  std::vector<int> rl(n);
  long le = 0, ge = 0;
  for (int b = 0; b < n_boot; ++b) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      bool has_pos = false, has_neg = false;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pick(rng);
        ra[i] = scores_a[j];
        rb[i] = scores_b[j];
        rl[i] = labels[j];
        (rl[i] == 1 ? has_pos : has_neg) = true;
      }
      ok = has_pos && has_neg;
    }
    if (!ok)
      throw std::runtime_error("bootstrap: could not draw a two-class resample");
    const double delta = normalized_pauc(ra, rl, window) - normalized_pauc(rb, rl, window);
    if (delta <= 0.0) ++le;
    if (delta >= 0.0) ++ge;
  }
  const double p_le = static_cast<double>(le) / n_boot;
  const double p_ge = static_cast<double>(ge) / n_boot;
  return std::min(1.0, 2.0 * std::min(p_le, p_ge));
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "threshold,fpr,tpr\n";
  char buf[128];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", curve.thresholds[i],
                  curve.fpr[i], curve.tpr[i]);
    f << buf;
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcs
