#include "binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

std::string feature_name(std::size_t aux_index,
                         const std::vector<std::string>& names) {
  if (aux_index < names.size() && !names[aux_index].empty())
    return names[aux_index];
  return "aux" + std::to_string(aux_index);
}

void check_feature_args(std::size_t aux_dim,
                        const std::vector<std::size_t>& features,
                        const std::vector<int>& bins_per_feature) {
  if (features.size() != bins_per_feature.size())
    throw Error(ErrorCode::argument,
                "features and bins_per_feature differ in length");
  std::set<std::size_t> seen;
  for (std::size_t f : features) {
    if (f >= aux_dim)
      throw Error(ErrorCode::argument,
                  "feature index " + std::to_string(f) +
                      " out of range for aux dimension " +
                      std::to_string(aux_dim));
    if (!seen.insert(f).second)
      throw Error(ErrorCode::argument,
                  "feature index " + std::to_string(f) + " listed twice");
  }
  for (int b : bins_per_feature)
    if (b < 1)
      throw Error(ErrorCode::argument, "bins per feature must be >= 1");
}

std::vector<double> column_values(const ScoredDataset& data, std::size_t f) {
  std::vector<double> v;
  v.reserve(data.size());
  for (const auto& s : data.samples) {
    if (f >= s.aux.size())
      throw Error(ErrorCode::argument,
                  "sample aux vector shorter than feature index");
    v.push_back(s.aux[f]);
  }
  return v;
}

std::vector<double> linspace_edges(double lo, double hi, int bins) {
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int j = 0; j <= bins; ++j)
    e[static_cast<std::size_t>(j)] =
        lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);
  e.front() = lo;
  e.back() = hi;
  return e;
}

}  // namespace

BinPartition BinPartition::single_bin(std::size_t aux_dim) {
  BinPartition p;
  p.aux_dim_ = aux_dim;
  p.rebuild_counts();
  return p;
}

BinPartition BinPartition::from_edges(std::size_t aux_dim,
                                      std::vector<FeatureEdges> features) {
  BinPartition p;
  p.aux_dim_ = aux_dim;
  std::set<std::size_t> seen;
  for (const auto& fe : features) {
    if (fe.aux_index >= aux_dim)
      throw Error(ErrorCode::argument,
                  "feature index " + std::to_string(fe.aux_index) +
                      " out of range for aux dimension " +
                      std::to_string(aux_dim));
    if (!seen.insert(fe.aux_index).second)
      throw Error(ErrorCode::argument, "feature index " +
                                           std::to_string(fe.aux_index) +
                                           " listed twice");
    if (fe.edges.size() < 2)
      throw Error(ErrorCode::argument,
                  "feature " + std::to_string(fe.aux_index) +
                      ": need at least two edges");
    for (std::size_t j = 0; j < fe.edges.size(); ++j) {
      if (!std::isfinite(fe.edges[j]))
        throw Error(ErrorCode::argument,
                    "feature " + std::to_string(fe.aux_index) +
                        ": edges must be finite");
      if (j > 0 && !(fe.edges[j - 1] < fe.edges[j]))
        throw Error(ErrorCode::argument,
                    "feature " + std::to_string(fe.aux_index) +
                        ": edges must be strictly increasing");
    }
  }
  p.features_ = std::move(features);
  p.rebuild_counts();
  return p;
}

void BinPartition::rebuild_counts() {
  cell_counts_.clear();
  bin_count_ = 1;
  for (const auto& fe : features_) {
    std::size_t cells = (fe.edges.size() - 1) + 2;
    cell_counts_.push_back(cells);
    bin_count_ *= cells;
  }
}

std::size_t BinPartition::assign(std::span<const double> aux) const {
  if (aux.size() != aux_dim_)
    throw Error(ErrorCode::argument,
                "aux vector has dimension " + std::to_string(aux.size()) +
                    ", partition expects " + std::to_string(aux_dim_));
  std::size_t index = 0;
  for (std::size_t d = 0; d < features_.size(); ++d) {
    const auto& e = features_[d].edges;
    double v = aux[features_[d].aux_index];
    if (!std::isfinite(v))
      throw Error(ErrorCode::argument, "non-finite auxiliary value");
    std::size_t cell;
    if (v < e.front()) {
      cell = 0;
    } else if (v > e.back()) {
      cell = cell_counts_[d] - 1;
    } else if (v == e.back()) {
      cell = e.size() - 1;  // topmost interior bin is closed above
    } else {
      auto it = std::upper_bound(e.begin(), e.end(), v);
      cell = static_cast<std::size_t>(it - e.begin());
    }
    index = index * cell_counts_[d] + cell;
  }
  return index;
}

std::string BinPartition::describe_bin(
    std::size_t bin, const std::vector<std::string>& names) const {
  if (bin >= bin_count_)
    throw Error(ErrorCode::argument,
                "bin index " + std::to_string(bin) + " out of range");
  if (features_.empty()) return "all";

  // decompose the mixed-radix index, first feature in the highest position
  std::vector<std::size_t> cells(features_.size());
  std::size_t rest = bin;
  for (std::size_t d = features_.size(); d-- > 0;) {
    cells[d] = rest % cell_counts_[d];
    rest /= cell_counts_[d];
  }

  std::ostringstream os;
  for (std::size_t d = 0; d < features_.size(); ++d) {
    if (d) os << " & ";
    const auto& e = features_[d].edges;
    std::size_t c = cells[d];
    os << feature_name(features_[d].aux_index, names) << " in ";
    if (c == 0)
      os << "(-inf, " << e.front() << ")";
    else if (c == cell_counts_[d] - 1)
      os << "(" << e.back() << ", inf)";
    else if (c == e.size() - 1)  // topmost interior: closed both ends
      os << "[" << e[c - 1] << ", " << e[c] << "]";
    else
      os << "[" << e[c - 1] << ", " << e[c] << ")";
  }
  return os.str();
}

std::string BinPartition::to_json() const {
  nlohmann::json j;
  j["aux_dim"] = aux_dim_;
  j["features"] = nlohmann::json::array();
  for (const auto& fe : features_)
    j["features"].push_back(
        {{"index", fe.aux_index}, {"edges", fe.edges}});
  return j.dump(2);
}

BinPartition BinPartition::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::parse, std::string("partition json: ") + e.what());
  }
  try {
    std::size_t aux_dim = j.at("aux_dim").get<std::size_t>();
    std::vector<FeatureEdges> features;
    for (const auto& f : j.at("features")) {
      FeatureEdges fe;
      fe.aux_index = f.at("index").get<std::size_t>();
      fe.edges = f.at("edges").get<std::vector<double>>();
      features.push_back(std::move(fe));
    }
    return BinPartition::from_edges(aux_dim, std::move(features));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::schema, std::string("partition json: ") + e.what());
  }
}

BinPartition make_equal_width_partition(
    const ScoredDataset& data, const std::vector<std::size_t>& features,
    const std::vector<int>& bins_per_feature) {
  check_feature_args(data.aux_dim(), features, bins_per_feature);
  if (data.samples.empty())
    throw Error(ErrorCode::empty_input, "cannot bin an empty dataset");
  std::vector<FeatureEdges> fes;
  for (std::size_t d = 0; d < features.size(); ++d) {
    std::vector<double> col = column_values(data, features[d]);
    auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    double lo = *lo_it, hi = *hi_it;
    if (!(lo < hi))
      throw Error(ErrorCode::degenerate,
                  "feature " + feature_name(features[d], data.aux_names) +
                      " is constant (" + std::to_string(lo) +
                      "); cannot form bins");
    FeatureEdges fe;
    fe.aux_index = features[d];
    fe.edges = linspace_edges(lo, hi, bins_per_feature[d]);
    for (std::size_t j = 1; j < fe.edges.size(); ++j)
      if (!(fe.edges[j - 1] < fe.edges[j]))
        throw Error(ErrorCode::degenerate,
                    "feature " + feature_name(features[d], data.aux_names) +
                        ": range too narrow for " +
                        std::to_string(bins_per_feature[d]) + " bins");
    fes.push_back(std::move(fe));
  }
  return BinPartition::from_edges(data.aux_dim(), std::move(fes));
}

BinPartition make_uniform_partition(std::size_t aux_dim,
                                    const std::vector<std::size_t>& features,
                                    const std::vector<int>& bins_per_feature,
                                    const std::vector<double>& lows,
                                    const std::vector<double>& highs) {
  check_feature_args(aux_dim, features, bins_per_feature);
  if (lows.size() != features.size() || highs.size() != features.size())
    throw Error(ErrorCode::argument,
                "range lists must match the feature list in length");
  std::vector<FeatureEdges> fes;
  for (std::size_t d = 0; d < features.size(); ++d) {
    if (!std::isfinite(lows[d]) || !std::isfinite(highs[d]) ||
        !(lows[d] < highs[d]))
      throw Error(ErrorCode::argument,
                  "feature " + std::to_string(features[d]) +
                      ": invalid range [" + std::to_string(lows[d]) + ", " +
                      std::to_string(highs[d]) + "]");
    FeatureEdges fe;
    fe.aux_index = features[d];
    fe.edges = linspace_edges(lows[d], highs[d], bins_per_feature[d]);
    fes.push_back(std::move(fe));
  }
  return BinPartition::from_edges(aux_dim, std::move(fes));
}

BinPartition make_quantile_partition(const ScoredDataset& data,
                                     const std::vector<std::size_t>& features,
                                     const std::vector<int>& bins_per_feature,
                                     std::vector<std::string>* warnings) {
  check_feature_args(data.aux_dim(), features, bins_per_feature);
  if (data.samples.empty())
    throw Error(ErrorCode::empty_input, "cannot bin an empty dataset");
  std::vector<FeatureEdges> fes;
  for (std::size_t d = 0; d < features.size(); ++d) {
    std::vector<double> col = column_values(data, features[d]);
    std::sort(col.begin(), col.end());
    double lo = col.front(), hi = col.back();
    if (!(lo < hi))
      throw Error(ErrorCode::degenerate,
                  "feature " + feature_name(features[d], data.aux_names) +
                      " is constant (" + std::to_string(lo) +
                      "); cannot form bins");
    int b = bins_per_feature[d];
    std::vector<double> edges;
    edges.push_back(lo);
    for (int j = 1; j < b; ++j)
      edges.push_back(sorted_quantile(col, static_cast<double>(j) /
                                               static_cast<double>(b)));
    edges.push_back(hi);
    // collapse duplicate quantiles; interior bin count shrinks accordingly
    std::vector<double> uniq;
    for (double e : edges)
      if (uniq.empty() || e > uniq.back()) uniq.push_back(e);
    if (uniq.size() < edges.size() && warnings)
      warnings->push_back(
          "feature " + feature_name(features[d], data.aux_names) + ": " +
          std::to_string(b) + " bins requested, " +
          std::to_string(uniq.size() - 1) +
          " effective after duplicate quantile edges");
    FeatureEdges fe;
    fe.aux_index = features[d];
    fe.edges = std::move(uniq);
    fes.push_back(std::move(fe));
  }
  return BinPartition::from_edges(data.aux_dim(), std::move(fes));
}

}  // namespace oer
