#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// exp(-1/2)/sqrt(2*pi): |d/dx gaussian_density| <= this / sigma^2
constexpr double kMaxDensitySlope = 0.24197072451914336876;

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::argument, "lambda must be positive and finite");
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
    throw Error(ErrorCode::argument, "learning_rate must be positive");
  if (cfg.max_iterations < 1)
    throw Error(ErrorCode::argument, "max_iterations must be at least 1");
  if (cfg.clamp != 0.0 && (!(cfg.clamp > 0.0) || !std::isfinite(cfg.clamp)))
    throw Error(ErrorCode::argument, "clamp must be positive");
}

bool has_mass(const BinStats& b) { return b.p_pos > 0.0 || b.p_neg > 0.0; }

double log_ratio_coeff(const BinStats& b) {
  // ln(p+ s- / (p- s+)) without overflow for extreme priors
  return std::log(b.p_pos) + std::log(b.sigma_neg) - std::log(b.p_neg) -
         std::log(b.sigma_pos);
}

/// Real solutions of p+ f(k) = lambda p- g(k). In log space this is the
/// quadratic
///   (k-mu+)^2/(2s+^2) - (k-mu-)^2/(2s-^2) = ln(p+ s-/(p- s+)) - ln(lambda).
/// Returns 0, 1 (equal variances) or 2 roots in ascending order.
int stationary_points(const BinStats& b, double lambda, double out[2]) {
  if (!(b.p_pos > 0.0) || !(b.p_neg > 0.0)) return 0;
  double sp2 = b.sigma_pos * b.sigma_pos;
  double sn2 = b.sigma_neg * b.sigma_neg;
  double a = 0.5 / sp2 - 0.5 / sn2;
  double bb = -b.mu_pos / sp2 + b.mu_neg / sn2;
  double c = 0.5 * b.mu_pos * b.mu_pos / sp2 -
             0.5 * b.mu_neg * b.mu_neg / sn2 -
             (log_ratio_coeff(b) - std::log(lambda));
  double scale = 0.5 / sp2 + 0.5 / sn2;
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(bb) <= 1e-300) return 0;  // densities proportional, no root
    out[0] = -c / bb;
    return std::isfinite(out[0]) ? 1 : 0;
  }
  double disc = bb * bb - 4.0 * a * c;
  if (!(disc >= 0.0)) return 0;
  double sq = std::sqrt(disc);
  double q = -0.5 * (bb + std::copysign(sq, bb == 0.0 ? 1.0 : bb));
  double r0, r1;
  if (q == 0.0) {
    r0 = r1 = 0.0;  // bb == 0 and disc == 0
  } else {
    r0 = q / a;
    r1 = c / q;
  }
  if (r0 > r1) std::swap(r0, r1);
  if (!std::isfinite(r0) || !std::isfinite(r1)) return 0;
  out[0] = r0;
  out[1] = r1;
  return 2;
}

/// Best threshold among the current iterate, the clamp boundaries and the
/// interior stationary points. Covers the global optimum: the objective's
/// derivative only vanishes at the stationary points, so the maximum on
/// [-K, K] is one of these candidates.
double best_candidate(const BinStats& b, double lambda, double clamp,
                      double k_current) {
  double k = std::clamp(k_current, -clamp, clamp);
  if (!has_mass(b)) return k;
  double cands[5];
  int n = 0;
  cands[n++] = k;
  double roots[2];
  int nr = stationary_points(b, lambda, roots);
  for (int i = 0; i < nr; ++i)
    if (roots[i] >= -clamp && roots[i] <= clamp) cands[n++] = roots[i];
  cands[n++] = -clamp;
  cands[n++] = clamp;
  double best = cands[0];
  double best_obj = bin_objective(b, cands[0], lambda);
  for (int i = 1; i < n; ++i) {
    double obj = bin_objective(b, cands[i], lambda);
    if (obj > best_obj) {
      best_obj = obj;
      best = cands[i];
    }
  }
  return best;
}

double closed_form_threshold(double mu_pos, double mu_neg, double sigma,
                             double p_pos, double p_neg, double lambda_log) {
  double k = sigma * sigma * (std::log(p_neg / p_pos) + lambda_log) /
                 (mu_pos - mu_neg) +
             0.5 * (mu_pos + mu_neg);
  return k;
}

std::vector<double> initial_thresholds(std::span<const BinStats> bins,
                                       InitMode mode, double lambda,
                                       double clamp,
                                       const BinModel* model /*may be null*/) {
  std::size_t n = bins.size();
  std::vector<double> k(n, 0.0);
  switch (mode) {
    case InitMode::zero:
      break;
    case InitMode::closed_form: {
      double lambda_log = std::log(lambda);
      for (std::size_t i = 0; i < n; ++i) {
        const BinStats& b = bins[i];
        double sigma;
        if (model) {
          sigma = model->pooled_bin_sigma(i);
        } else {
          double wp = b.n_pos > 1 ? static_cast<double>(b.n_pos - 1) : 0.0;
          double wn = b.n_neg > 1 ? static_cast<double>(b.n_neg - 1) : 0.0;
          sigma = (wp + wn > 0.0)
                      ? std::sqrt((wp * b.sigma_pos * b.sigma_pos +
                                   wn * b.sigma_neg * b.sigma_neg) /
                                  (wp + wn))
                      : 0.5 * (b.sigma_pos + b.sigma_neg);
        }
        double dmu = b.mu_pos - b.mu_neg;
        if (!has_mass(b) || b.p_pos <= 0.0 || b.p_neg <= 0.0 ||
            std::abs(dmu) <=
                1e-12 * (std::abs(b.mu_pos) + std::abs(b.mu_neg) + 1.0) ||
            !(sigma > 0.0)) {
          k[i] = 0.0;
          continue;
        }
        k[i] = closed_form_threshold(b.mu_pos, b.mu_neg, sigma, b.p_pos,
                                     b.p_neg, lambda_log);
      }
      break;
    }
    case InitMode::grid: {
      constexpr int kGridPoints = 128;
      for (std::size_t i = 0; i < n; ++i) {
        if (!has_mass(bins[i])) continue;
        double best = -clamp;
        double best_obj = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= kGridPoints; ++j) {
          double x = -clamp + 2.0 * clamp * j / kGridPoints;
          double obj = bin_objective(bins[i], x, lambda);
          if (obj > best_obj) {
            best_obj = obj;
            best = x;
          }
        }
        k[i] = best;
      }
      break;
    }
  }
  for (double& v : k) v = std::clamp(v, -clamp, clamp);
  return k;
}

ThresholdCurve solve_core(std::span<const BinStats> bins, double lambda,
                          const SolverConfig& cfg, const double* warm_start,
                          const BinModel* model) {
  check_lambda(lambda);
  check_config(cfg);
  std::size_t n = bins.size();
  if (n == 0) throw Error(ErrorCode::argument, "no bins to solve");

  double clamp = cfg.clamp > 0.0 ? cfg.clamp : default_clamp(bins);
  double eps = cfg.stop_threshold > 0.0
                   ? cfg.stop_threshold
                   : 1e-8 * std::sqrt(static_cast<double>(n));

  std::vector<double> k(n);
  if (warm_start) {
    for (std::size_t i = 0; i < n; ++i)
      k[i] = std::clamp(warm_start[i], -clamp, clamp);
  } else {
    k = initial_thresholds(bins, cfg.init, lambda, clamp, model);
  }
  for (std::size_t i = 0; i < n; ++i)
    k[i] = best_candidate(bins[i], lambda, clamp, k[i]);

  // per-bin step size from the residual's slope bound, so the iteration
  // contracts regardless of the bin's scale
  std::vector<double> zeta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const BinStats& b = bins[i];
    double slope =
        kMaxDensitySlope * (b.p_pos / (b.sigma_pos * b.sigma_pos) +
                            lambda * b.p_neg / (b.sigma_neg * b.sigma_neg));
    zeta[i] = slope > 0.0 ? cfg.learning_rate / slope : 0.0;
  }

  std::vector<double> res(n, 0.0);
  long iterations = 0;
  double min_step = 1e-15 * std::max(1.0, clamp);
  for (long it = 0; it < cfg.max_iterations; ++it) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res[i] = stationarity_residual(bins[i], k[i], lambda);
      bool pinned = (k[i] == -clamp && res[i] > 0.0) ||
                    (k[i] == clamp && res[i] < 0.0);
      if (!pinned) norm2 += res[i] * res[i];
    }
    if (std::sqrt(norm2) <= eps) break;
    double max_step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double next = std::clamp(k[i] - zeta[i] * res[i], -clamp, clamp);
      max_step = std::max(max_step, std::abs(next - k[i]));
      k[i] = next;
    }
    iterations = it + 1;
    if (max_step <= min_step) break;  // no representable progress
  }
  for (std::size_t i = 0; i < n; ++i)
    k[i] = best_candidate(bins[i], lambda, clamp, k[i]);

  ThresholdCurve curve;
  curve.thresholds = std::move(k);
  curve.lambda = lambda;
  curve.clamp = clamp;
  curve.iterations = iterations;
  curve.bin_converged.resize(n, 0);
  curve.converged = true;
  for (std::size_t i = 0; i < n; ++i) {
    double r = stationarity_residual(bins[i], curve.thresholds[i], lambda);
    bool ok = std::abs(r) <= eps || curve.thresholds[i] == -clamp ||
              curve.thresholds[i] == clamp;
    curve.bin_converged[i] = ok ? 1 : 0;
    curve.converged = curve.converged && ok;
  }
  return curve;
}

}  // namespace

double benefit_cost_ratio(const BinStats& bin, double k) {
  if (!std::isfinite(k))
    throw Error(ErrorCode::argument, "threshold must be finite");
  if (bin.p_pos <= 0.0 && bin.p_neg <= 0.0)
    throw Error(ErrorCode::degenerate,
                "benefit-cost ratio undefined: bin has no mass in either class");
  if (bin.p_neg <= 0.0) return std::numeric_limits<double>::infinity();
  double zp = (k - bin.mu_pos) / bin.sigma_pos;
  double zn = (k - bin.mu_neg) / bin.sigma_neg;
  double ln_r = log_ratio_coeff(bin) - 0.5 * zp * zp + 0.5 * zn * zn;
  return std::exp(ln_r);
}

double stationarity_residual(const BinStats& bin, double k, double lambda) {
  double pos =
      bin.p_pos > 0.0
          ? bin.p_pos * gaussian_density(k, bin.mu_pos, bin.sigma_pos)
          : 0.0;
  double neg =
      bin.p_neg > 0.0
          ? bin.p_neg * gaussian_density(k, bin.mu_neg, bin.sigma_neg)
          : 0.0;
  return pos - lambda * neg;
}

double bin_objective(const BinStats& bin, double k, double lambda) {
  double pos = bin.p_pos > 0.0
                   ? bin.p_pos * gaussian_sf(k, bin.mu_pos, bin.sigma_pos)
                   : 0.0;
  double neg = bin.p_neg > 0.0
                   ? bin.p_neg * gaussian_sf(k, bin.mu_neg, bin.sigma_neg)
                   : 0.0;
  return pos - lambda * neg;
}

double default_clamp(std::span<const BinStats> bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sigma = 0.0;
  for (const BinStats& b : bins) {
    lo = std::min({lo, b.mu_pos, b.mu_neg});
    hi = std::max({hi, b.mu_pos, b.mu_neg});
    sigma = std::max({sigma, b.sigma_pos, b.sigma_neg});
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return 1.0;
  double k = std::max(std::abs(hi + 10.0 * sigma), std::abs(lo - 10.0 * sigma));
  return std::max(k, 1.0);
}

double default_clamp(const BinModel& model) {
  return default_clamp(std::span<const BinStats>(model.all_stats()));
}

ThresholdCurve solve_gradient(std::span<const BinStats> bins, double lambda,
                              const SolverConfig& config,
                              const double* warm_start) {
  return solve_core(bins, lambda, config, warm_start, nullptr);
}

ThresholdCurve solve_gradient(const BinModel& model, double lambda,
                              const SolverConfig& config) {
  return solve_core(std::span<const BinStats>(model.all_stats()), lambda,
                    config, nullptr, &model);
}

ThresholdCurve solve_closed_form(const BinModel& model, double lambda_log,
                                 const SolverConfig& config) {
  if (!std::isfinite(lambda_log))
    throw Error(ErrorCode::argument, "lambda_log must be finite");
  check_config(config);
  std::size_t n = model.bin_count();
  double clamp = config.clamp > 0.0 ? config.clamp : default_clamp(model);

  ThresholdCurve curve;
  curve.thresholds.resize(n, 0.0);
  curve.lambda = std::exp(lambda_log);
  curve.clamp = clamp;
  curve.bin_converged.assign(n, 1);
  curve.converged = true;
  curve.iterations = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const BinStats& b = model.stats(i);
    if (b.sigma_pos != b.sigma_neg)
      throw Error(ErrorCode::argument,
                  "closed form needs an equal-variance model; bin " +
                      std::to_string(i) + " has sigma_pos != sigma_neg");
    if (b.mu_pos == b.mu_neg)
      throw Error(ErrorCode::degenerate,
                  "bin " + std::to_string(i) +
                      ": class means coincide, threshold undefined");
    // prior term: +-inf when one class is absent pushes k to the matching
    // clamp boundary; a fully empty bin gets the balanced threshold
    double prior_term;
    if (b.p_pos > 0.0 && b.p_neg > 0.0)
      prior_term = std::log(b.p_neg / b.p_pos);
    else if (b.p_pos <= 0.0 && b.p_neg <= 0.0)
      prior_term = 0.0;
    else
      prior_term = b.p_pos <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
    double k = b.sigma_pos * b.sigma_pos * (prior_term + lambda_log) /
                   (b.mu_pos - b.mu_neg) +
               0.5 * (b.mu_pos + b.mu_neg);
    curve.thresholds[i] = std::clamp(k, -clamp, clamp);
  }
  return curve;
}

double grid_oracle(const BinStats& bin, double lambda, double clamp,
                   int resolution) {
  check_lambda(lambda);
  if (!(clamp > 0.0) || !std::isfinite(clamp))
    throw Error(ErrorCode::argument, "clamp must be positive");
  if (resolution < 1000)
    throw Error(ErrorCode::argument, "oracle resolution must be >= 1000");
  if (!has_mass(bin)) return 0.0;

  // The objective can be rewritten, up to a constant in k, through either
  // tail of each class CDF.  All variants agree in real arithmetic, but in
  // doubles only the one whose terms stay tail-small keeps the k-dependence
  // above roundoff: with both survival terms near 1 (optimum far below both
  // means) the survival form is flat to machine precision, and the other
  // variants have matching blind spots on the other side.  Search each
  // segment of [-clamp, clamp] delimited by the class means with the variant
  // that is well conditioned there, then compare the champions.
  auto pos_sf = [&](double x) {
    return bin.p_pos > 0.0 ? bin.p_pos * gaussian_sf(x, bin.mu_pos, bin.sigma_pos)
                           : 0.0;
  };
  auto pos_cdf = [&](double x) {
    return bin.p_pos > 0.0 ? bin.p_pos * gaussian_cdf(x, bin.mu_pos, bin.sigma_pos)
                           : 0.0;
  };
  auto neg_sf = [&](double x) {
    return bin.p_neg > 0.0 ? bin.p_neg * gaussian_sf(x, bin.mu_neg, bin.sigma_neg)
                           : 0.0;
  };
  auto neg_cdf = [&](double x) {
    return bin.p_neg > 0.0 ? bin.p_neg * gaussian_cdf(x, bin.mu_neg, bin.sigma_neg)
                           : 0.0;
  };
  enum { kAbove = 0, kBelow = 1, kBetween = 2 };
  auto eval = [&](double x, int form) {
    switch (form) {
      case kAbove:
        return pos_sf(x) - lambda * neg_sf(x);
      case kBelow:
        return lambda * neg_cdf(x) - pos_cdf(x);
      default:
        return bin.mu_pos >= bin.mu_neg ? -(pos_cdf(x) + lambda * neg_sf(x))
                                        : pos_sf(x) + lambda * neg_cdf(x);
    }
  };

  double lo_mean = std::numeric_limits<double>::infinity();
  double hi_mean = -std::numeric_limits<double>::infinity();
  if (bin.p_pos > 0.0) {
    lo_mean = std::min(lo_mean, bin.mu_pos);
    hi_mean = std::max(hi_mean, bin.mu_pos);
  }
  if (bin.p_neg > 0.0) {
    lo_mean = std::min(lo_mean, bin.mu_neg);
    hi_mean = std::max(hi_mean, bin.mu_neg);
  }
  struct Segment {
    double a, b;
    int form;
  };
  std::vector<Segment> segs;
  double cut_lo = std::clamp(lo_mean, -clamp, clamp);
  double cut_hi = std::clamp(hi_mean, -clamp, clamp);
  if (cut_lo > -clamp) segs.push_back({-clamp, cut_lo, kBelow});
  if (cut_hi > cut_lo) segs.push_back({cut_lo, cut_hi, kBetween});
  if (clamp > cut_hi) segs.push_back({cut_hi, clamp, kAbove});
  if (segs.empty()) segs.push_back({-clamp, clamp, kAbove});

  constexpr double kInvPhi = 0.61803398874989484820;
  double best = -clamp;
  double best_obj = 0.0;
  bool have_best = false;
  for (const Segment& s : segs) {
    auto obj = [&](double x) { return eval(x, s.form); };
    double seg_best = s.a;
    double seg_best_obj = obj(seg_best);
    int best_idx = 0;
    for (int j = 1; j <= resolution; ++j) {
      double x = s.a + (s.b - s.a) * j / resolution;
      double v = obj(x);
      if (v > seg_best_obj) {
        seg_best_obj = v;
        seg_best = x;
        best_idx = j;
      }
    }

    // golden-section refinement around the best grid cell
    double h = (s.b - s.a) / resolution;
    double a = std::max(s.a, s.a + (best_idx - 1) * h);
    double b = std::min(s.b, s.a + (best_idx + 1) * h);
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = obj(c), fd = obj(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, clamp); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = obj(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = obj(d);
      }
    }
    double mid = 0.5 * (a + b);
    if (obj(mid) > seg_best_obj) seg_best = mid;

    // champions from different segments are far enough apart that the plain
    // survival form separates them; ties keep the leftmost segment
    double common = bin_objective(bin, seg_best, lambda);
    if (!have_best || common > best_obj) {
      best = seg_best;
      best_obj = common;
      have_best = true;
    }
  }
  return best;
}

std::vector<ThresholdCurve> sweep_lambda(const BinModel& model,
                                         const std::vector<double>& lambdas,
                                         const SolverConfig& config) {
  if (lambdas.empty())
    throw Error(ErrorCode::argument, "lambda grid is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    check_lambda(lambdas[i]);
    if (i > 0 && !(lambdas[i - 1] < lambdas[i]))
      throw Error(ErrorCode::argument,
                  "lambda grid must be strictly increasing");
  }

  bool closed_form_ok = true;
  for (const BinStats& b : model.all_stats()) {
    if (b.sigma_pos != b.sigma_neg || b.mu_pos == b.mu_neg) {
      closed_form_ok = false;
      break;
    }
    if (has_mass(b) && !(b.mu_pos > b.mu_neg)) {
      closed_form_ok = false;  // inverted bin: the stationary point is not
      break;                   // the maximum there, use the iterative path
    }
  }

  std::vector<ThresholdCurve> out;
  out.reserve(lambdas.size());
  if (closed_form_ok) {
    for (double l : lambdas)
      out.push_back(solve_closed_form(model, std::log(l), config));
    return out;
  }
  const double* warm = nullptr;
  for (double l : lambdas) {
    out.push_back(solve_gradient(std::span<const BinStats>(model.all_stats()),
                                 l, config, warm));
    warm = out.back().thresholds.data();
  }
  return out;
}

std::vector<double> auto_lambda_grid(const BinModel& model,
                                     const ScoredDataset& data, int size) {
  if (size < 1) throw Error(ErrorCode::argument, "grid size must be >= 1");
  if (data.samples.empty())
    throw Error(ErrorCode::empty_input, "no data for the lambda grid");

  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& s : data.samples) scores.push_back(s.score);
  std::sort(scores.begin(), scores.end());
  double q_lo = sorted_quantile(scores, 0.001);
  double q_hi = sorted_quantile(scores, 0.999);

  // benefit-cost ratios (in log space) at the extreme scores bound the
  // useful trade-off range; pad by a decade each way
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const BinStats& b : model.all_stats()) {
    if (!(b.p_pos > 0.0) || !(b.p_neg > 0.0)) continue;
    for (double q : {q_lo, q_hi}) {
      double zp = (q - b.mu_pos) / b.sigma_pos;
      double zn = (q - b.mu_neg) / b.sigma_neg;
      double ln_r = log_ratio_coeff(b) - 0.5 * zp * zp + 0.5 * zn * zn;
      lo = std::min(lo, ln_r);
      hi = std::max(hi, ln_r);
    }
  }
  constexpr double kLn10 = 2.30258509299404568402;
  constexpr double kMaxAbsLn = 34.5;  // about 1e15
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = -3.0 * kLn10;
    hi = 3.0 * kLn10;
  } else {
    lo = std::clamp(lo - kLn10, -kMaxAbsLn, kMaxAbsLn);
    hi = std::clamp(hi + kLn10, -kMaxAbsLn, kMaxAbsLn);
  }
  if (!(lo < hi) || size == 1) return {std::exp(0.5 * (lo + hi))};

  std::vector<double> grid(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j)
    grid[static_cast<std::size_t>(j)] =
        std::exp(lo + (hi - lo) * static_cast<double>(j) /
                          static_cast<double>(size - 1));
  for (std::size_t j = 1; j < grid.size(); ++j)
    if (!(grid[j - 1] < grid[j]))
      throw Error(ErrorCode::internal, "lambda grid not increasing");
  return grid;
}

PredictedPoint predicted_operating_point(const BinModel& model,
                                         const ThresholdCurve& curve) {
  if (curve.thresholds.size() != model.bin_count())
    throw Error(ErrorCode::argument,
                "threshold vector length does not match the model");
  double tpr = 0.0, fpr = 0.0;
  for (std::size_t i = 0; i < model.bin_count(); ++i) {
    const BinStats& b = model.stats(i);
    double k = curve.thresholds[i];
    if (b.p_pos > 0.0) tpr += b.p_pos * gaussian_sf(k, b.mu_pos, b.sigma_pos);
    if (b.p_neg > 0.0) fpr += b.p_neg * gaussian_sf(k, b.mu_neg, b.sigma_neg);
  }
  return {std::clamp(fpr, 0.0, 1.0), std::clamp(tpr, 0.0, 1.0)};
}

}  // namespace oer
