#include "featselect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "binning.hpp"
#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

double weighted_variance(const std::vector<double>& values,
                         const std::vector<double>& weights) {
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    wsum += weights[i];
    mean += weights[i] * values[i];
  }
  if (wsum <= 0.0) return 0.0;
  mean /= wsum;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - mean;
    var += weights[i] * d * d;
  }
  return var / wsum;
}

}  // namespace

double separation_difficulty(const BinStats& bin, SdDenominator denom) {
  double prod = bin.sigma_pos * bin.sigma_neg;
  double d = denom == SdDenominator::product ? prod : std::sqrt(prod);
  return (bin.mu_pos - bin.mu_neg) / d;
}

double prior_measure(const BinStats& bin) {
  if (!(bin.p_pos > 0.0) || !(bin.p_neg > 0.0))
    throw Error(ErrorCode::argument,
                "prior measure undefined: a class has zero mass in this bin");
  return std::log(bin.p_pos * bin.sigma_neg / (bin.p_neg * bin.sigma_pos));
}

FeatureReport score_feature(const ScoredDataset& data,
                            std::size_t feature_index, int nbins,
                            const FeatureScoreOptions& options) {
  if (nbins < 2)
    throw Error(ErrorCode::argument, "feature scoring needs nbins >= 2");
  if (feature_index >= data.aux_dim())
    throw Error(ErrorCode::argument,
                "feature index " + std::to_string(feature_index) +
                    " out of range");

  BinPartition part =
      options.strategy == BinStrategy::equal_width
          ? make_equal_width_partition(data, {feature_index}, {nbins})
          : make_quantile_partition(data, {feature_index}, {nbins});
  BinModel model = fit_bin_model(data, part, options.fit);

  FeatureReport rep;
  rep.name = feature_index < data.aux_names.size()
                 ? data.aux_names[feature_index]
                 : "aux" + std::to_string(feature_index);
  rep.feature_index = feature_index;

  double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> sd_vals, sd_w, pr_vals, pr_w;
  for (std::size_t i = 0; i < model.bin_count(); ++i) {
    const BinStats& b = model.stats(i);
    double w = 0.5 * (b.p_pos + b.p_neg);
    if (w <= 0.0) {
      rep.sd_values.push_back(nan);
      rep.prior_values.push_back(nan);
      continue;
    }
    double sd = separation_difficulty(b, options.sd_denominator);
    rep.sd_values.push_back(sd);
    sd_vals.push_back(sd);
    sd_w.push_back(w);
    if (b.p_pos > 0.0 && b.p_neg > 0.0) {
      double pm = prior_measure(b);
      rep.prior_values.push_back(pm);
      pr_vals.push_back(pm);
      pr_w.push_back(w);
    } else {
      rep.prior_values.push_back(nan);
      rep.excluded_bins.push_back(i);
    }
  }
  rep.sd_variance = weighted_variance(sd_vals, sd_w);
  rep.prior_variance = weighted_variance(pr_vals, pr_w);
  return rep;
}

std::vector<FeatureReport> rank_features(const ScoredDataset& data, int nbins,
                                         double sd_variance_min,
                                         double prior_variance_min,
                                         const FeatureScoreOptions& options) {
  if (data.aux_dim() == 0)
    throw Error(ErrorCode::argument, "dataset has no auxiliary features");
  std::vector<FeatureReport> reports;
  for (std::size_t f = 0; f < data.aux_dim(); ++f)
    reports.push_back(score_feature(data, f, nbins, options));

  double sd_max = 0.0, pr_max = 0.0;
  for (const auto& r : reports) {
    sd_max = std::max(sd_max, r.sd_variance);
    pr_max = std::max(pr_max, r.prior_variance);
  }
  for (auto& r : reports) {
    double sd_norm = sd_max > 0.0 ? r.sd_variance / sd_max : 0.0;
    double pr_norm = pr_max > 0.0 ? r.prior_variance / pr_max : 0.0;
    r.rank_score = std::max(sd_norm, pr_norm);
    r.accepted = r.sd_variance >= sd_variance_min ||
                 r.prior_variance >= prior_variance_min;
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const FeatureReport& a, const FeatureReport& b) {
                     return a.rank_score > b.rank_score;
                   });
  return reports;
}

void write_reports_csv(const std::string& path,
                       const std::vector<FeatureReport>& reports) {
  std::ostringstream os;
  os << "feature,index,sd_variance,prior_variance,rank_score,accepted,"
        "excluded_bins\n";
  char buf[64];
  for (const auto& r : reports) {
    os << r.name << ',' << r.feature_index << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.sd_variance);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.prior_variance);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.rank_score);
    os << buf << ',' << (r.accepted ? 1 : 0) << ',';
    for (std::size_t i = 0; i < r.excluded_bins.size(); ++i) {
      if (i) os << ' ';
      os << r.excluded_bins[i];
    }
    os << '\n';
  }
  atomic_write_text(path, os.str());
}

}  // namespace oer
