#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace oer {

enum class SdDenominator { product, geometric_mean };
enum class BinStrategy { equal_width, quantile };

/// How hard the classes are to separate inside one bin:
///   (mu_pos - mu_neg) / (sigma_pos * sigma_neg),
/// or with sqrt(sigma_pos * sigma_neg) as denominator in the
/// geometric_mean variant (unit-consistent alternative).
double separation_difficulty(const BinStats& bin,
                             SdDenominator denom = SdDenominator::product);

/// Log benefit-cost level of the bin: ln(p_pos sigma_neg / (p_neg sigma_pos)).
/// Requires positive mass in both classes.
double prior_measure(const BinStats& bin);

struct FeatureScoreOptions {
  BinStrategy strategy = BinStrategy::equal_width;
  SdDenominator sd_denominator = SdDenominator::product;
  FitOptions fit;
};

/// Per-bin measures for one candidate feature plus their mass-weighted
/// variances across bins. A feature is useful for thresholding exactly when
/// a measure varies between bins.
struct FeatureReport {
  std::string name;
  std::size_t feature_index = 0;
  std::vector<double> sd_values;      // per bin; NaN where the bin is empty
  std::vector<double> prior_values;   // per bin; NaN where excluded
  std::vector<std::size_t> excluded_bins;  // mass in one class only
  double sd_variance = 0.0;
  double prior_variance = 0.0;
  double rank_score = 0.0;  // filled by rank_features
  bool accepted = false;
};

/// Bin the data on feature `feature_index` alone (nbins interior bins),
/// fit, and compute both measures with their across-bin variances weighted
/// by bin mass (p_pos + p_neg)/2. Bins with mass in exactly one class are
/// excluded from the prior variance and listed in excluded_bins.
FeatureReport score_feature(const ScoredDataset& data, std::size_t feature_index,
                            int nbins, const FeatureScoreOptions& options = {});

/// Score every auxiliary feature and rank by the larger of the two
/// max-normalized variances. A feature is rejected only when both variances
/// fall below their thresholds.
std::vector<FeatureReport> rank_features(const ScoredDataset& data, int nbins,
                                         double sd_variance_min,
                                         double prior_variance_min,
                                         const FeatureScoreOptions& options = {});

void write_reports_csv(const std::string& path,
                       const std::vector<FeatureReport>& reports);

}  // namespace oer
