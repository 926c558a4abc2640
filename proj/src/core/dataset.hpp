#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace oer {

/// One labeled observation: class label in {+1,-1}, the base classifier's
/// real-valued score, and the auxiliary feature vector used for binning.
struct LabeledSample {
  int label = 1;
  double score = 0.0;
  std::vector<double> aux;

  bool operator==(const LabeledSample&) const = default;
};

struct ScoredDataset {
  std::vector<LabeledSample> samples;
  std::vector<std::string> aux_names;

  std::size_t size() const { return samples.size(); }
  std::size_t aux_dim() const { return aux_names.size(); }
  std::size_t count_label(int label) const;

  bool operator==(const ScoredDataset&) const = default;
};

/// Column mapping for delimited text files. A header row is mandatory and
/// columns are selected by name. Leaving aux_cols empty selects every
/// column that is neither the label nor the score, in header order.
/// Label cells must match pos_label or neg_label exactly (after trimming).
struct CsvSchema {
  std::string label_col = "label";
  std::string score_col = "score";
  std::vector<std::string> aux_cols;
  std::string pos_label = "1";
  std::string neg_label = "-1";
  char delimiter = ',';
};

ScoredDataset parse_dataset(std::istream& in, const CsvSchema& schema = {});
ScoredDataset read_dataset_file(const std::string& path,
                                const CsvSchema& schema = {});

/// Canonical form: comma-delimited, header "label,score,<aux...>", labels
/// written as 1 / -1, doubles with round-trip precision. parse_dataset with
/// the default schema reads this back unchanged.
void write_dataset(std::ostream& out, const ScoredDataset& data);
void write_dataset_file(const std::string& path, const ScoredDataset& data);

struct FoldPair {
  ScoredDataset train;
  ScoredDataset test;
};

/// Deterministic stratified k-fold split: each class is shuffled with the
/// seeded engine and dealt into `folds` contiguous chunks, so per-fold class
/// fractions match the full dataset up to one sample. Every sample appears
/// in exactly one test fold; train is the complement, original order kept.
std::vector<FoldPair> split_dataset(const ScoredDataset& data, int folds,
                                    std::uint64_t seed);

}  // namespace oer
