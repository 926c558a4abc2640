#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binning.hpp"
#include "dataset.hpp"
#include "model.hpp"
#include "solver.hpp"

namespace oer {

enum class PartitionStrategy { equal_width, quantile, uniform_range };

struct PartitionSettings {
  PartitionStrategy strategy = PartitionStrategy::equal_width;
  std::vector<std::size_t> features = {0};
  std::vector<int> bins = {8};
  // uniform_range only: explicit [low, high] per feature
  std::vector<double> range_lows;
  std::vector<double> range_highs;
};

struct ExperimentConfig {
  PartitionSettings partition;
  FitOptions fit;
  SolverConfig solver;
  int lambda_grid_size = 200;
  int baseline_offsets = 512;
  int folds = 10;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: keep everything in memory
  bool write_fold_curves = true;
};

struct MethodSummary {
  std::vector<double> fold_aucs;
  double auc_mean = 0.0;
  double auc_std = 0.0;
};

/// Cross-validated comparison of the per-bin threshold sweep against the
/// fixed threshold and the dynamic mean-tracking baselines, all evaluated
/// on held-out folds.
struct ExperimentResult {
  int folds = 0;
  std::uint64_t seed = 0;
  MethodSummary oer;             // upper envelope of the λ sweep's points
  MethodSummary fixed;           // single-threshold curve
  MethodSummary constant_fpr;    // k_i = mu_i(-) + c
  MethodSummary constant_tpr;    // k_i = mu_i(+) + c
  MethodSummary rocch_baselines; // convex hull of both baselines
  double oer_minus_fixed_auc = 0.0;
  double one_minus_auc_reduction = 0.0;  // share of (1 - fixed AUC) removed
  int sign_wins = 0;  // folds where the sweep's AUC >= fixed AUC
  std::vector<std::string> warnings;
  std::vector<std::string> output_files;
};

BinPartition build_partition(const ScoredDataset& data,
                             const PartitionSettings& settings,
                             std::vector<std::string>* warnings = nullptr);

ExperimentResult run_roc_experiment(const ScoredDataset& data,
                                    const ExperimentConfig& config);

std::string experiment_summary_json(const ExperimentResult& result);
ExperimentConfig experiment_config_from_json(const std::string& text);

}  // namespace oer
