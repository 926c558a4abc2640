#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binning.hpp"
#include "dataset.hpp"

namespace oer {

double gaussian_density(double x, double mu, double sigma);
double gaussian_cdf(double x, double mu, double sigma);
/// 1 - cdf, computed directly so the upper tail keeps relative accuracy.
double gaussian_sf(double x, double mu, double sigma);

/// Score distribution of one bin: class-conditional Gaussians plus the
/// bin's share of each class. p_pos = P(bin | y=+1), p_neg = P(bin | y=-1).
struct BinStats {
  double mu_pos = 0.0;
  double sigma_pos = 1.0;
  double mu_neg = 0.0;
  double sigma_neg = 1.0;
  double p_pos = 0.0;
  double p_neg = 0.0;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  bool fallback_pos = false;  // class stats borrowed from the pooled fit
  bool fallback_neg = false;

  bool operator==(const BinStats&) const = default;
};

struct PooledClassStats {
  double mu = 0.0;
  double sigma = 1.0;
  std::uint64_t n = 0;

  bool operator==(const PooledClassStats&) const = default;
};

struct FitOptions {
  int min_count = 5;         // below this, a bin borrows the pooled class fit
  double sigma_floor = 0.0;  // <= 0: max(1e-6, 1e-3 * pooled class sigma)
  bool equal_variance = false;
};

/// Per-bin Gaussian score model over a partition of auxiliary space.
/// Priors sum to one per class across bins (up to rounding).
class BinModel {
 public:
  BinModel() = default;
  BinModel(BinPartition partition, std::vector<BinStats> stats,
           PooledClassStats pooled_pos, PooledClassStats pooled_neg,
           double sigma_floor_pos, double sigma_floor_neg,
           bool equal_variance);

  /// Build directly from per-bin stats; pooled summaries are derived from
  /// the bins. Meant for handcrafted models.
  static BinModel from_stats(BinPartition partition,
                             std::vector<BinStats> stats);

  std::size_t bin_count() const { return stats_.size(); }
  const BinStats& stats(std::size_t bin) const;
  const std::vector<BinStats>& all_stats() const { return stats_; }
  const BinPartition& partition() const { return partition_; }
  const PooledClassStats& pooled_pos() const { return pooled_pos_; }
  const PooledClassStats& pooled_neg() const { return pooled_neg_; }
  double sigma_floor_pos() const { return sigma_floor_pos_; }
  double sigma_floor_neg() const { return sigma_floor_neg_; }
  bool is_equal_variance() const { return equal_variance_; }

  /// Per-bin variance pool: sqrt of the df-weighted average of the two
  /// class variances. Falls back to their plain average when the bin has
  /// fewer than two samples per class.
  double pooled_bin_sigma(std::size_t bin) const;

  /// Copy with sigma_pos = sigma_neg = pooled_bin_sigma per bin.
  BinModel equalized() const;

  std::string to_json() const;
  static BinModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static BinModel load(const std::string& path);

  bool operator==(const BinModel&) const = default;

 private:
  BinPartition partition_;
  std::vector<BinStats> stats_;
  PooledClassStats pooled_pos_;
  PooledClassStats pooled_neg_;
  double sigma_floor_pos_ = 1e-6;
  double sigma_floor_neg_ = 1e-6;
  bool equal_variance_ = false;

  void validate() const;
};

/// Estimate a BinModel: per bin and class, sample mean and unbiased
/// standard deviation of the scores; bins with fewer than min_count samples
/// of a class borrow that class's pooled fit. Priors are raw count shares.
/// Both classes must be present in the data.
BinModel fit_bin_model(const ScoredDataset& data, const BinPartition& partition,
                       const FitOptions& options = {});

}  // namespace oer
