#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "binning.hpp"
#include "dataset.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace oer {

/// One ROC operating point. `param` records the sweep parameter that
/// produced it (a threshold, an offset, or a trade-off level λ).
struct OperatingPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  std::optional<double> param;
};

enum class ParamKind { none, threshold, offset, lambda };

struct RocCurve {
  std::vector<OperatingPoint> points;
  bool anchored = false;  // starts at fpr 0 and ends at fpr 1
  ParamKind param_kind = ParamKind::none;
};

/// Empirical rates of the decision rule "score >= k[bin] is positive".
/// Needs at least one sample of each class.
OperatingPoint empirical_point(const ScoredDataset& data,
                               const BinPartition& partition,
                               const ThresholdCurve& curve);

/// Conventional single-threshold ROC: one point per distinct score, swept
/// from +inf down, with the (0,0) and (1,1) anchors. Ties move together.
RocCurve fixed_threshold_curve(const ScoredDataset& data);

enum class BaselineMode { constant_fpr, constant_tpr };

/// Dynamic-threshold baselines: per bin k_i = mu_i(class) + c for a common
/// offset c swept over a grid wide enough to reach both anchors.
/// constant_fpr tracks the negative means, constant_tpr the positive means.
RocCurve offset_baseline_curve(const ScoredDataset& data, const BinModel& model,
                               BaselineMode mode, int n_offsets = 512);

/// Raw per-λ operating points of a threshold sweep, sorted by fpr.
/// Not anchored; use upper_envelope before computing AUC.
RocCurve oer_empirical_curve(const ScoredDataset& data,
                             const BinPartition& partition,
                             const std::vector<ThresholdCurve>& curves);

/// Monotone upper envelope: anchors added, one point per distinct fpr at
/// the running-max tpr. The result is anchored and nondecreasing.
RocCurve upper_envelope(const RocCurve& curve);

/// Convex hull (upper) of the union of the given curves' points plus the
/// anchors. Successive segment slopes are nonincreasing.
RocCurve rocch(const std::vector<RocCurve>& curves);

/// Trapezoidal area under an anchored curve with nondecreasing fpr.
double auc(const RocCurve& curve);

struct PairwiseAuc {
  double value = 0.0;
  bool exact = true;
  double std_error = 0.0;  // 0 for the exact path
};

/// Probability that a random positive outscores a random negative, ties
/// counting half. Exact pair counting up to 1e8 pairs, otherwise a seeded
/// Monte Carlo estimate over at least 1e6 pairs with its standard error.
PairwiseAuc auc_pairwise(
    const ScoredDataset& data,
    const std::function<double(const LabeledSample&)>& scorer = {},
    std::uint64_t mc_seed = 2024);

void write_curve_csv(const std::string& path, const RocCurve& curve);

}  // namespace oer
