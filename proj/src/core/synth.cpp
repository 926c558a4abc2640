#include "synth.hpp"

#include <cmath>
#include <random>

#include "error.hpp"

namespace oer {

namespace {

void check_n(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::argument, "sample count must be >= 1");
}

}  // namespace

ScoredDataset gen_example1(std::size_t n, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x1_dist(1.0, 5.0);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> unit;

  ScoredDataset data;
  data.aux_names = {"X1"};
  data.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x1 = x1_dist(rng);
    int y = coin(rng) ? 1 : -1;
    double x2 = y > 0 ? x1 + unit(rng) : unit(rng);
    data.samples.push_back({y, x2, {x1}});
  }
  return data;
}

ScoredDataset gen_example2(std::size_t n, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> unit;
  const double sqrt2 = std::sqrt(2.0);

  ScoredDataset data;
  data.aux_names = {"X1"};
  data.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    int y = coin(rng) ? 1 : -1;
    double x1, x2;
    if (y > 0) {
      x1 = sqrt2 * unit(rng);
      x2 = 1.0 + sqrt2 * unit(rng);
    } else {
      x1 = unit(rng);
      x2 = unit(rng);
    }
    data.samples.push_back({y, x2, {x1}});
  }
  return data;
}

ScoredDataset gen_custom(const SynthSpec& spec, std::size_t n,
                         std::uint64_t seed) {
  check_n(n);
  if (spec.bins.empty())
    throw Error(ErrorCode::spec, "custom spec has no bins");
  if (!(spec.positive_fraction >= 0.0 && spec.positive_fraction <= 1.0))
    throw Error(ErrorCode::spec, "positive_fraction outside [0,1]");
  double sum_pos = 0.0, sum_neg = 0.0;
  for (std::size_t i = 0; i < spec.bins.size(); ++i) {
    const auto& b = spec.bins[i];
    if (!(b.sigma_pos > 0.0) || !(b.sigma_neg > 0.0))
      throw Error(ErrorCode::spec,
                  "bin " + std::to_string(i) + ": sigma must be positive");
    if (b.p_pos < 0.0 || b.p_neg < 0.0)
      throw Error(ErrorCode::spec,
                  "bin " + std::to_string(i) + ": negative bin share");
    sum_pos += b.p_pos;
    sum_neg += b.p_neg;
  }
  if (std::abs(sum_pos - 1.0) > 1e-9 || std::abs(sum_neg - 1.0) > 1e-9)
    throw Error(ErrorCode::spec, "bin shares must sum to 1 per class");

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(spec.positive_fraction);
  std::normal_distribution<double> unit;
  std::vector<double> wp, wn;
  for (const auto& b : spec.bins) {
    wp.push_back(b.p_pos);
    wn.push_back(b.p_neg);
  }
  std::discrete_distribution<std::size_t> pick_pos(wp.begin(), wp.end());
  std::discrete_distribution<std::size_t> pick_neg(wn.begin(), wn.end());

  ScoredDataset data;
  data.aux_names = {"bin"};
  data.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    int y = coin(rng) ? 1 : -1;
    std::size_t bin = y > 0 ? pick_pos(rng) : pick_neg(rng);
    const auto& b = spec.bins[bin];
    double score = y > 0 ? b.mu_pos + b.sigma_pos * unit(rng)
                         : b.mu_neg + b.sigma_neg * unit(rng);
    data.samples.push_back({y, score, {static_cast<double>(bin)}});
  }
  return data;
}

}  // namespace oer
