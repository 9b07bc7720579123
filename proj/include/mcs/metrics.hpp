#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcs {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

/// Fields are empty when the corresponding denominator is zero.
struct MetricReport {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> accuracy;
  std::optional<double> precision;
};

/// ROC as ordered (fpr, tpr) vertices with the score threshold that
/// produces each vertex. Starts at (0,0) with threshold +inf, ends at
/// (1,1); tied scores collapse into a single diagonal step.
struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  std::vector<double> thresholds;
  std::size_t size() const { return fpr.size(); }
};

struct PaucValue {
  double raw_area = 0.0;    // in [0, spec_hi - spec_lo]
  double normalized = 0.0;  // raw_area / (spec_hi - spec_lo)
  double spec_lo = 0.0;
  double spec_hi = 0.0;
};

ConfusionCounts confusion(std::span<const int> predictions,
                          std::span<const int> labels);

MetricReport report(const ConfusionCounts& counts);

/// Requires at least one positive and one negative label.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area; equals the tie-corrected pairwise probability
/// P(score+ > score-) + P(tie)/2.
double auc(const RocCurve& curve);

/// Area restricted to specificity in [spec_lo, spec_hi], linear
/// interpolation at the window edges.
PaucValue partial_auc(const RocCurve& curve, double spec_lo, double spec_hi);

/// Convenience: normalized pAUC straight from scores/labels.
double normalized_pauc(std::span<const double> scores, std::span<const int> labels,
                       std::pair<double, double> window);

/// Paired percentile bootstrap comparing the pAUCs of two score columns
/// over the same labels. Two-sided p-value for H0: pAUC_a == pAUC_b.
double bootstrap_pauc_test(std::span<const double> scores_a,
                           std::span<const double> scores_b,
                           std::span<const int> labels,
                           std::pair<double, double> window, int n_boot,
                           std::uint64_t seed);

/// CSV with header `threshold,fpr,tpr`.
void write_roc_csv(const RocCurve& curve, const std::string& path);

}  // namespace mcs
