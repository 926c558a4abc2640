#include "model.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2 = 1.41421356237309504880;

void check_gaussian_args(double x, double mu, double sigma) {
  if (!std::isfinite(x) || !std::isfinite(mu))
    throw Error(ErrorCode::argument, "non-finite gaussian argument");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::argument, "gaussian sigma must be positive");
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double sample_sd() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1));
  }
};

}  // namespace

double gaussian_density(double x, double mu, double sigma) {
  check_gaussian_args(x, mu, sigma);
  double z = (x - mu) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

double gaussian_cdf(double x, double mu, double sigma) {
  check_gaussian_args(x, mu, sigma);
  double z = (x - mu) / sigma;
  return 0.5 * std::erfc(-z / kSqrt2);
}

double gaussian_sf(double x, double mu, double sigma) {
  check_gaussian_args(x, mu, sigma);
  double z = (x - mu) / sigma;
  return 0.5 * std::erfc(z / kSqrt2);
}

BinModel::BinModel(BinPartition partition, std::vector<BinStats> stats,
                   PooledClassStats pooled_pos, PooledClassStats pooled_neg,
                   double sigma_floor_pos, double sigma_floor_neg,
                   bool equal_variance)
    : partition_(std::move(partition)),
      stats_(std::move(stats)),
      pooled_pos_(pooled_pos),
      pooled_neg_(pooled_neg),
      sigma_floor_pos_(sigma_floor_pos),
      sigma_floor_neg_(sigma_floor_neg),
      equal_variance_(equal_variance) {
  validate();
}

void BinModel::validate() const {
  if (stats_.empty())
    throw Error(ErrorCode::argument, "model needs at least one bin");
  if (stats_.size() != partition_.bin_count())
    throw Error(ErrorCode::argument,
                "stats count " + std::to_string(stats_.size()) +
                    " does not match partition bin count " +
                    std::to_string(partition_.bin_count()));
  double sum_pos = 0.0, sum_neg = 0.0;
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    const BinStats& b = stats_[i];
    if (!std::isfinite(b.mu_pos) || !std::isfinite(b.mu_neg) ||
        !std::isfinite(b.sigma_pos) || !std::isfinite(b.sigma_neg))
      throw Error(ErrorCode::argument,
                  "bin " + std::to_string(i) + ": non-finite statistics");
    if (!(b.sigma_pos > 0.0) || !(b.sigma_neg > 0.0))
      throw Error(ErrorCode::argument,
                  "bin " + std::to_string(i) + ": sigma must be positive");
    if (!(b.p_pos >= 0.0) || !(b.p_neg >= 0.0) || b.p_pos > 1.0 ||
        b.p_neg > 1.0)
      throw Error(ErrorCode::argument,
                  "bin " + std::to_string(i) + ": priors outside [0,1]");
    sum_pos += b.p_pos;
    sum_neg += b.p_neg;
  }
  if (std::abs(sum_pos - 1.0) > 1e-12 || std::abs(sum_neg - 1.0) > 1e-12)
    throw Error(ErrorCode::argument,
                "bin priors must sum to 1 per class (got " +
                    std::to_string(sum_pos) + " / " + std::to_string(sum_neg) +
                    ")");
  if (!(sigma_floor_pos_ > 0.0) || !(sigma_floor_neg_ > 0.0))
    throw Error(ErrorCode::argument, "sigma floors must be positive");
}

BinModel BinModel::from_stats(BinPartition partition,
                              std::vector<BinStats> stats) {
  PooledClassStats pos, neg;
  double wp = 0.0, wn = 0.0, mp = 0.0, mn = 0.0, sp = 0.0, sn = 0.0;
  for (const auto& b : stats) {
    wp += b.p_pos;
    wn += b.p_neg;
    mp += b.p_pos * b.mu_pos;
    mn += b.p_neg * b.mu_neg;
    sp = std::max(sp, b.sigma_pos);
    sn = std::max(sn, b.sigma_neg);
    pos.n += b.n_pos;
    neg.n += b.n_neg;
  }
  pos.mu = wp > 0 ? mp / wp : 0.0;
  neg.mu = wn > 0 ? mn / wn : 0.0;
  pos.sigma = sp > 0 ? sp : 1.0;
  neg.sigma = sn > 0 ? sn : 1.0;
  return BinModel(std::move(partition), std::move(stats), pos, neg, 1e-6,
                  1e-6, false);
}

const BinStats& BinModel::stats(std::size_t bin) const {
  if (bin >= stats_.size())
    throw Error(ErrorCode::argument,
                "bin index " + std::to_string(bin) + " out of range");
  return stats_[bin];
}

double BinModel::pooled_bin_sigma(std::size_t bin) const {
  const BinStats& b = stats(bin);
  double wp = b.n_pos > 1 ? static_cast<double>(b.n_pos - 1) : 0.0;
  double wn = b.n_neg > 1 ? static_cast<double>(b.n_neg - 1) : 0.0;
  if (wp + wn <= 0.0) return 0.5 * (b.sigma_pos + b.sigma_neg);
  double var = (wp * b.sigma_pos * b.sigma_pos +
                wn * b.sigma_neg * b.sigma_neg) /
               (wp + wn);
  return std::sqrt(var);
}

BinModel BinModel::equalized() const {
  BinModel m = *this;
  for (std::size_t i = 0; i < m.stats_.size(); ++i) {
    double s = pooled_bin_sigma(i);
    double floor = std::min(sigma_floor_pos_, sigma_floor_neg_);
    s = std::max(s, floor);
    m.stats_[i].sigma_pos = s;
    m.stats_[i].sigma_neg = s;
  }
  m.equal_variance_ = true;
  return m;
}

std::string BinModel::to_json() const {
  nlohmann::json j;
  j["format"] = "oer-model";
  j["version"] = 1;
  j["partition"] = nlohmann::json::parse(partition_.to_json());
  j["equal_variance"] = equal_variance_;
  j["sigma_floor_pos"] = sigma_floor_pos_;
  j["sigma_floor_neg"] = sigma_floor_neg_;
  j["pooled_pos"] = {{"mu", pooled_pos_.mu},
                     {"sigma", pooled_pos_.sigma},
                     {"n", pooled_pos_.n}};
  j["pooled_neg"] = {{"mu", pooled_neg_.mu},
                     {"sigma", pooled_neg_.sigma},
                     {"n", pooled_neg_.n}};
  j["bins"] = nlohmann::json::array();
  for (const auto& b : stats_) {
    j["bins"].push_back({{"mu_pos", b.mu_pos},
                         {"sigma_pos", b.sigma_pos},
                         {"mu_neg", b.mu_neg},
                         {"sigma_neg", b.sigma_neg},
                         {"p_pos", b.p_pos},
                         {"p_neg", b.p_neg},
                         {"n_pos", b.n_pos},
                         {"n_neg", b.n_neg},
                         {"fallback_pos", b.fallback_pos},
                         {"fallback_neg", b.fallback_neg}});
  }
  return j.dump(2);
}

BinModel BinModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::parse, std::string("model json: ") + e.what());
  }
  try {
    if (j.value("format", "") != "oer-model")
      throw Error(ErrorCode::schema, "model json: wrong or missing format tag");
    BinPartition part = BinPartition::from_json(j.at("partition").dump());
    std::vector<BinStats> stats;
    for (const auto& bj : j.at("bins")) {
      BinStats b;
      b.mu_pos = bj.at("mu_pos").get<double>();
      b.sigma_pos = bj.at("sigma_pos").get<double>();
      b.mu_neg = bj.at("mu_neg").get<double>();
      b.sigma_neg = bj.at("sigma_neg").get<double>();
      b.p_pos = bj.at("p_pos").get<double>();
      b.p_neg = bj.at("p_neg").get<double>();
      b.n_pos = bj.at("n_pos").get<std::uint64_t>();
      b.n_neg = bj.at("n_neg").get<std::uint64_t>();
      b.fallback_pos = bj.value("fallback_pos", false);
      b.fallback_neg = bj.value("fallback_neg", false);
      stats.push_back(b);
    }
    PooledClassStats pos{j.at("pooled_pos").at("mu").get<double>(),
                         j.at("pooled_pos").at("sigma").get<double>(),
                         j.at("pooled_pos").at("n").get<std::uint64_t>()};
    PooledClassStats neg{j.at("pooled_neg").at("mu").get<double>(),
                         j.at("pooled_neg").at("sigma").get<double>(),
                         j.at("pooled_neg").at("n").get<std::uint64_t>()};
    return BinModel(std::move(part), std::move(stats), pos, neg,
                    j.at("sigma_floor_pos").get<double>(),
                    j.at("sigma_floor_neg").get<double>(),
                    j.at("equal_variance").get<bool>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::schema, std::string("model json: ") + e.what());
  }
}

void BinModel::save(const std::string& path) const {
  atomic_write_text(path, to_json() + "\n");
}

BinModel BinModel::load(const std::string& path) {
  return from_json(read_text_file(path));
}

BinModel fit_bin_model(const ScoredDataset& data, const BinPartition& partition,
                       const FitOptions& options) {
  if (data.samples.empty())
    throw Error(ErrorCode::empty_input, "cannot fit on an empty dataset");
  std::size_t nbins = partition.bin_count();

  std::vector<Welford> acc_pos(nbins), acc_neg(nbins);
  Welford pool_pos, pool_neg;
  for (const auto& s : data.samples) {
    std::size_t bin = partition.assign(s.aux);
    if (s.label > 0) {
      acc_pos[bin].add(s.score);
      pool_pos.add(s.score);
    } else {
      acc_neg[bin].add(s.score);
      pool_neg.add(s.score);
    }
  }
  if (pool_pos.n == 0 || pool_neg.n == 0)
    throw Error(ErrorCode::fit,
                std::string("cannot fit: no ") +
                    (pool_pos.n == 0 ? "positive" : "negative") +
                    " samples in the data");

  double floor_pos, floor_neg;
  if (options.sigma_floor > 0.0) {
    floor_pos = floor_neg = options.sigma_floor;
  } else {
    floor_pos = std::max(1e-6, 1e-3 * pool_pos.sample_sd());
    floor_neg = std::max(1e-6, 1e-3 * pool_neg.sample_sd());
  }

  PooledClassStats pooled_pos{pool_pos.mean,
                              std::max(pool_pos.sample_sd(), floor_pos),
                              pool_pos.n};
  PooledClassStats pooled_neg{pool_neg.mean,
                              std::max(pool_neg.sample_sd(), floor_neg),
                              pool_neg.n};

  std::uint64_t need =
      options.min_count > 0 ? static_cast<std::uint64_t>(options.min_count) : 1;

  std::vector<BinStats> stats(nbins);
  for (std::size_t i = 0; i < nbins; ++i) {
    BinStats& b = stats[i];
    b.n_pos = acc_pos[i].n;
    b.n_neg = acc_neg[i].n;
    b.p_pos = static_cast<double>(b.n_pos) / static_cast<double>(pool_pos.n);
    b.p_neg = static_cast<double>(b.n_neg) / static_cast<double>(pool_neg.n);
    if (b.n_pos < need) {
      b.mu_pos = pooled_pos.mu;
      b.sigma_pos = pooled_pos.sigma;
      b.fallback_pos = true;
    } else {
      b.mu_pos = acc_pos[i].mean;
      b.sigma_pos = std::max(acc_pos[i].sample_sd(), floor_pos);
    }
    if (b.n_neg < need) {
      b.mu_neg = pooled_neg.mu;
      b.sigma_neg = pooled_neg.sigma;
      b.fallback_neg = true;
    } else {
      b.mu_neg = acc_neg[i].mean;
      b.sigma_neg = std::max(acc_neg[i].sample_sd(), floor_neg);
    }
  }

  BinModel model(partition, std::move(stats), pooled_pos, pooled_neg,
                 floor_pos, floor_neg, false);
  if (options.equal_variance) return model.equalized();
  return model;
}

}  // namespace oer
