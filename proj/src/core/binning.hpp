#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace oer {

/// Full edge list for one partitioned feature: e_0 < e_1 < ... < e_B.
/// B interior bins plus an underflow and an overflow bin.
struct FeatureEdges {
  std::size_t aux_index = 0;
  std::vector<double> edges;
};

/// Cartesian product of per-feature interval partitions over auxiliary
/// feature space. Per feature the cells are:
///   0            underflow, x < e_0
///   j in 1..B    [e_{j-1}, e_j), except the topmost interior bin which is
///                closed on both ends so x == e_B stays interior
///   B+1          overflow, x > e_B
/// Multi-feature indices combine in mixed radix, first feature varying
/// slowest. A partition over no features has exactly one bin.
class BinPartition {
 public:
  BinPartition() = default;  // single bin over a 0-dimensional aux space

  static BinPartition single_bin(std::size_t aux_dim);
  static BinPartition from_edges(std::size_t aux_dim,
                                 std::vector<FeatureEdges> features);

  std::size_t aux_dim() const { return aux_dim_; }
  std::size_t bin_count() const { return bin_count_; }
  const std::vector<FeatureEdges>& features() const { return features_; }

  /// Map an auxiliary vector to its bin index. Total: every finite vector
  /// of the right dimension lands in exactly one bin.
  std::size_t assign(std::span<const double> aux) const;

  /// Human-readable cell bounds, e.g. "X1 in [1.5, 2)". `names` may supply
  /// per-aux-dimension display names; missing entries fall back to "aux<i>".
  std::string describe_bin(std::size_t bin,
                           const std::vector<std::string>& names = {}) const;

  std::string to_json() const;
  static BinPartition from_json(const std::string& text);

  bool operator==(const BinPartition& other) const {
    if (aux_dim_ != other.aux_dim_ || features_.size() != other.features_.size())
      return false;
    for (std::size_t d = 0; d < features_.size(); ++d)
      if (features_[d].aux_index != other.features_[d].aux_index ||
          features_[d].edges != other.features_[d].edges)
        return false;
    return true;
  }

 private:
  std::size_t aux_dim_ = 0;
  std::vector<FeatureEdges> features_;
  std::vector<std::size_t> cell_counts_;  // per feature: interior + 2
  std::size_t bin_count_ = 1;

  void rebuild_counts();
};

/// Equal-width edges from the observed min/max of each listed feature.
/// bins_per_feature counts interior bins; a constant feature is an error.
BinPartition make_equal_width_partition(const ScoredDataset& data,
                                        const std::vector<std::size_t>& features,
                                        const std::vector<int>& bins_per_feature);

/// Equal-width edges over explicit [low, high] ranges, independent of data.
BinPartition make_uniform_partition(std::size_t aux_dim,
                                    const std::vector<std::size_t>& features,
                                    const std::vector<int>& bins_per_feature,
                                    const std::vector<double>& lows,
                                    const std::vector<double>& highs);

/// Edges at empirical quantiles. Duplicate quantile values collapse, so the
/// effective bin count can be lower than requested; each collapse appends a
/// message to `warnings` when given.
BinPartition make_quantile_partition(const ScoredDataset& data,
                                     const std::vector<std::size_t>& features,
                                     const std::vector<int>& bins_per_feature,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace oer
