#pragma once

#include <cstdint>
#include <vector>

#include "dataset.hpp"

namespace oer {

/// Heteroscedastic-difficulty world: X1 ~ U[1,5] is the auxiliary feature,
/// labels are balanced coin flips, and the score is X2 with
/// X2 | +1 ~ N(X1, 1) and X2 | -1 ~ N(0, 1). Separation grows with X1.
ScoredDataset gen_example1(std::size_t n, std::uint64_t seed);

/// Unequal-spread world: positives draw (X1, X2) ~ N((0,1), 2I), negatives
/// ~ N(0, I). The score is X2, the auxiliary feature X1; class variances
/// differ in every bin.
ScoredDataset gen_example2(std::size_t n, std::uint64_t seed);

/// Direct per-bin specification for handcrafted worlds. p_pos/p_neg are the
/// bin's share of each class and must sum to one across bins.
struct CustomBinSpec {
  double mu_pos = 0.0;
  double sigma_pos = 1.0;
  double mu_neg = 0.0;
  double sigma_neg = 1.0;
  double p_pos = 0.0;
  double p_neg = 0.0;
};

struct SynthSpec {
  std::vector<CustomBinSpec> bins;
  double positive_fraction = 0.5;
};

/// Sample labels, then bins from the class's bin distribution, then scores
/// from the bin's class Gaussian. The auxiliary feature is the bin index.
ScoredDataset gen_custom(const SynthSpec& spec, std::size_t n,
                         std::uint64_t seed);

}  // namespace oer
