#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace oer {

enum class InitMode { zero, closed_form, grid };

struct SolverConfig {
  double learning_rate = 0.1;  // scaled per bin by the residual's slope bound
  double stop_threshold = 0.0;    // <= 0: 1e-8 * sqrt(bin count)
  long max_iterations = 100000;
  double clamp = 0.0;             // <= 0: derived from the model, see default_clamp
  InitMode init = InitMode::closed_form;
};

/// Threshold vector for one trade-off level λ. A bin counts as converged
/// when its stationarity residual is within tolerance or its threshold sits
/// on the clamp boundary.
struct ThresholdCurve {
  std::vector<double> thresholds;
  double lambda = 1.0;  // benefit-cost ratio at the solution (trade-off level)
  double clamp = 0.0;
  std::vector<std::uint8_t> bin_converged;
  bool converged = false;
  long iterations = 0;
};

/// Per-bin gain/loss trade-off of moving the threshold:
///   (p_pos * density_pos(k)) / (p_neg * density_neg(k)).
/// Returns +inf when the bin has positive mass only; a bin with no mass in
/// either class has no defined ratio and raises a degenerate error.
double benefit_cost_ratio(const BinStats& bin, double k);

/// p_pos * f(k) - lambda * p_neg * g(k); zero at stationary thresholds.
double stationarity_residual(const BinStats& bin, double k, double lambda);

/// Per-bin contribution to the solved objective:
///   p_pos * P(score >= k | +1, bin) - lambda * p_neg * P(score >= k | -1, bin).
double bin_objective(const BinStats& bin, double k, double lambda);

/// Clamp bound wide enough that every class density is negligible outside
/// [-K, K]: the bin means' range padded by ten of the largest sigma.
double default_clamp(std::span<const BinStats> bins);
double default_clamp(const BinModel& model);

/// Iterative solver. Starts from the configured init (or `warm_start` when
/// given), improves each bin with the exact stationary-point candidates of
/// the Gaussian model, then runs the projected point-wise iteration
///   k_i <- k_i - zeta_i * [p_i+ f_i(k_i) - lambda p_i- g_i(k_i)]
/// until the l2 norm of the residuals over unpinned bins drops to the stop
/// threshold. Thresholds stay in [-K, K]; per-bin global optimality over
/// the candidate set holds at exit.
ThresholdCurve solve_gradient(std::span<const BinStats> bins, double lambda,
                              const SolverConfig& config = {},
                              const double* warm_start = nullptr);
ThresholdCurve solve_gradient(const BinModel& model, double lambda,
                              const SolverConfig& config = {});

/// Equal-variance exact solution per bin:
///   k_i = sigma_i^2 [ln(p_i-/p_i+) + lambda_log] / (mu_i+ - mu_i-)
///         + (mu_i+ + mu_i-) / 2,
/// clamped into [-K, K]. lambda_log is the log of the benefit-cost ratio.
/// Requires sigma_pos == sigma_neg in every bin; a bin with
/// mu_pos == mu_neg is a degenerate error. A bin with mass in one class
/// only is pushed to the matching clamp boundary; a bin with no mass at
/// all gets the balanced (equal-priors) threshold.
ThresholdCurve solve_closed_form(const BinModel& model, double lambda_log,
                                 const SolverConfig& config = {});

/// Brute-force reference: objective argmax over a uniform grid on [-K, K]
/// refined by golden-section search. resolution >= 1000.
double grid_oracle(const BinStats& bin, double lambda, double clamp,
                   int resolution = 4000);

/// Solve for every λ in ascending order, warm-starting each solve from the
/// previous solution. Routes to the closed form when the model is
/// equal-variance with mu_pos > mu_neg in every bin that has mass.
std::vector<ThresholdCurve> sweep_lambda(const BinModel& model,
                                         const std::vector<double>& lambdas,
                                         const SolverConfig& config = {});

/// Log-spaced λ grid sized to the model: spans the benefit-cost ratios seen
/// at the data's extreme score quantiles, padded by a decade on both sides.
std::vector<double> auto_lambda_grid(const BinModel& model,
                                     const ScoredDataset& data, int size);

/// Model-implied operating point of a threshold vector:
///   fpr = sum_i p_i- * P(score >= k_i | -1),  tpr analogous over +1.
struct PredictedPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};
PredictedPoint predicted_operating_point(const BinModel& model,
                                         const ThresholdCurve& curve);

}  // namespace oer
