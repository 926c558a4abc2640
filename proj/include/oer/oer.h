/* Dynamic per-bin decision thresholds for binary classifier scores.
 *
 * The library post-processes a score-producing binary classifier: auxiliary
 * feature space is split into bins, each bin gets a Gaussian model of the
 * class-conditional score distributions, and a per-bin threshold vector is
 * solved so that, at a chosen trade-off level lambda, no redistribution of
 * errors between bins can improve the true-positive rate without paying
 * more in false positives. Sweeping lambda traces an operating curve that
 * dominates the single fixed threshold whenever bins differ.
 *
 * Conventions:
 *  - every function returns an oer_status; OER_OK is 0
 *  - on failure, oer_last_error() describes the problem (thread-local)
 *  - out-parameters are written only on success
 *  - objects are created into handle out-parameters and released with the
 *    matching _free function; handles are never shared between calls that
 *    run concurrently on different threads unless stated otherwise; all
 *    reads of a fully constructed object are thread-safe
 *  - strings returned through char** are heap-allocated; release them with
 *    oer_string_free
 */
#ifndef OER_H
#define OER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oer_status {
  OER_OK = 0,
  OER_ERR_ARGUMENT = 1,
  OER_ERR_PARSE = 2,
  OER_ERR_SCHEMA = 3,
  OER_ERR_IO = 4,
  OER_ERR_EMPTY_INPUT = 5,
  OER_ERR_FIT = 6,
  OER_ERR_DEGENERATE = 7,
  OER_ERR_SPEC = 8,
  OER_ERR_INTERNAL = 9
} oer_status;

const char* oer_version(void);
/* Message for the most recent failure on this thread; "" if none. */
const char* oer_last_error(void);
void oer_string_free(char* s);

/* ---------- datasets ---------- */

typedef struct oer_dataset oer_dataset;

typedef struct oer_csv_schema {
  const char* label_col;  /* NULL: "label" */
  const char* score_col;  /* NULL: "score" */
  const char* const* aux_cols; /* NULL or empty: all remaining columns */
  size_t n_aux_cols;
  const char* pos_label;  /* NULL: "1" */
  const char* neg_label;  /* NULL: "-1" */
  char delimiter;         /* 0: ',' */
} oer_csv_schema;

oer_status oer_dataset_read_csv(const char* path, const oer_csv_schema* schema,
                                oer_dataset** out);
oer_status oer_dataset_parse_csv(const char* text, const oer_csv_schema* schema,
                                 oer_dataset** out);
oer_status oer_dataset_write_csv(const oer_dataset* data, const char* path);
/* example_id: "example1" (difficulty grows with the auxiliary feature) or
 * "example2" (class spreads differ everywhere). */
oer_status oer_dataset_synth(const char* example_id, uint64_t n, uint64_t seed,
                             oer_dataset** out);
oer_status oer_dataset_size(const oer_dataset* data, size_t* out);
oer_status oer_dataset_aux_dim(const oer_dataset* data, size_t* out);
oer_status oer_dataset_aux_name(const oer_dataset* data, size_t index,
                                char** out);
oer_status oer_dataset_counts(const oer_dataset* data, size_t* n_pos,
                              size_t* n_neg);
/* Stratified k-fold split; fold_index selects which fold is the test half. */
oer_status oer_dataset_split(const oer_dataset* data, int folds, uint64_t seed,
                             int fold_index, oer_dataset** train,
                             oer_dataset** test);
void oer_dataset_free(oer_dataset* data);

/* ---------- partitions of auxiliary feature space ---------- */

typedef struct oer_partition oer_partition;

oer_status oer_partition_single_bin(size_t aux_dim, oer_partition** out);
/* Equal-width interior bins between the observed min and max per feature;
 * underflow/overflow bins are added automatically. */
oer_status oer_partition_equal_width(const oer_dataset* data,
                                     const size_t* features, const int* bins,
                                     size_t n_features, oer_partition** out);
/* Equal-width interior bins over explicit [low, high] ranges. */
oer_status oer_partition_uniform(size_t aux_dim, const size_t* features,
                                 const int* bins, const double* lows,
                                 const double* highs, size_t n_features,
                                 oer_partition** out);
/* Interior edges at empirical quantiles; duplicate edges collapse. When
 * warnings_out is non-NULL it receives a newline-joined description of any
 * collapses (or an empty string). */
oer_status oer_partition_quantile(const oer_dataset* data,
                                  const size_t* features, const int* bins,
                                  size_t n_features, char** warnings_out,
                                  oer_partition** out);
oer_status oer_partition_bin_count(const oer_partition* p, size_t* out);
oer_status oer_partition_aux_dim(const oer_partition* p, size_t* out);
oer_status oer_partition_assign(const oer_partition* p, const double* aux,
                                size_t dim, size_t* out);
/* Cell bounds as text; names may be NULL to use generic feature names. */
oer_status oer_partition_describe_bin(const oer_partition* p, size_t bin,
                                      const char* const* names, size_t n_names,
                                      char** out);
oer_status oer_partition_to_json(const oer_partition* p, char** out);
oer_status oer_partition_from_json(const char* text, oer_partition** out);
void oer_partition_free(oer_partition* p);

/* ---------- per-bin Gaussian models ---------- */

typedef struct oer_model oer_model;

typedef struct oer_bin_stats {
  double mu_pos, sigma_pos;
  double mu_neg, sigma_neg;
  double p_pos, p_neg;   /* bin's share of each class */
  uint64_t n_pos, n_neg;
  int fallback_pos, fallback_neg; /* class stats borrowed from pooled fit */
} oer_bin_stats;

/* min_count: bins with fewer samples of a class borrow the pooled class
 * fit (<=0 keeps only the one-sample minimum). sigma_floor <= 0 picks
 * max(1e-6, 1e-3 * pooled class sigma). equal_variance != 0 pools the two
 * class sigmas per bin. */
oer_status oer_model_fit(const oer_dataset* data, const oer_partition* p,
                         int min_count, double sigma_floor, int equal_variance,
                         oer_model** out);
oer_status oer_model_bin_count(const oer_model* m, size_t* out);
oer_status oer_model_bin_stats(const oer_model* m, size_t bin,
                               oer_bin_stats* out);
oer_status oer_model_is_equal_variance(const oer_model* m, int* out);
oer_status oer_model_to_json(const oer_model* m, char** out);
oer_status oer_model_from_json(const char* text, oer_model** out);
oer_status oer_model_save(const oer_model* m, const char* path);
oer_status oer_model_load(const char* path, oer_model** out);
void oer_model_free(oer_model* m);

oer_status oer_gaussian_density(double x, double mu, double sigma, double* out);
oer_status oer_gaussian_cdf(double x, double mu, double sigma, double* out);

/* ---------- threshold solving ---------- */

typedef struct oer_solver_config {
  double learning_rate;  /* per-bin step scale, default 0.1 */
  double stop_threshold; /* residual l2 target; <= 0: 1e-8 * sqrt(bins) */
  long max_iterations;   /* default 100000 */
  double clamp;          /* |k| bound K; <= 0: derived from the model */
  int init_mode;         /* 0 zero, 1 closed-form, 2 coarse grid */
} oer_solver_config;

void oer_solver_config_default(oer_solver_config* out);

typedef struct oer_thresholds oer_thresholds;

/* Per-bin thresholds at trade-off level lambda (benefit-cost ratio). */
oer_status oer_solve(const oer_model* m, double lambda,
                     const oer_solver_config* config, oer_thresholds** out);
/* Equal-variance exact solution; lambda_log is ln(lambda), any real. */
oer_status oer_solve_closed_form(const oer_model* m, double lambda_log,
                                 const oer_solver_config* config,
                                 oer_thresholds** out);
oer_status oer_thresholds_info(const oer_thresholds* t, size_t* bins,
                               double* lambda, double* clamp, int* converged,
                               long* iterations);
oer_status oer_thresholds_bin(const oer_thresholds* t, size_t bin, double* k,
                              int* converged);
oer_status oer_thresholds_values(const oer_thresholds* t, double* buf,
                                 size_t buflen);
void oer_thresholds_free(oer_thresholds* t);

/* Gain/loss ratio of moving a bin's threshold; +inf when the bin has
 * positive mass only. */
oer_status oer_benefit_cost_ratio(const oer_bin_stats* bin, double k,
                                  double* out);
/* Brute-force per-bin reference optimum (grid + golden-section). */
oer_status oer_grid_oracle(const oer_bin_stats* bin, double lambda,
                           double clamp, int resolution, double* out);
/* Model-implied operating point of a threshold vector. */
oer_status oer_predicted_point(const oer_model* m, const oer_thresholds* t,
                               double* fpr, double* tpr);

typedef struct oer_sweep oer_sweep;

/* Solve for every lambda (ascending), warm-starting along the grid. */
oer_status oer_sweep_lambdas(const oer_model* m, const double* lambdas,
                             size_t n, const oer_solver_config* config,
                             oer_sweep** out);
/* Same, with a log-spaced grid sized from the model and training scores. */
oer_status oer_sweep_auto(const oer_model* m, const oer_dataset* train,
                          int grid_size, const oer_solver_config* config,
                          oer_sweep** out);
oer_status oer_sweep_size(const oer_sweep* s, size_t* out);
/* Borrowed handle, valid while the sweep lives; do not free it. */
oer_status oer_sweep_get(const oer_sweep* s, size_t index,
                         const oer_thresholds** out);
oer_status oer_sweep_write_csv(const oer_sweep* s, const oer_model* m,
                               const char* path);
void oer_sweep_free(oer_sweep* s);

/* ---------- ROC curves ---------- */

typedef struct oer_roc oer_roc;

/* Single-threshold ROC over all distinct scores, with anchors. */
oer_status oer_roc_fixed(const oer_dataset* data, oer_roc** out);
/* mode 0: thresholds track per-bin negative means; 1: positive means. */
oer_status oer_roc_baseline(const oer_dataset* data, const oer_model* m,
                            int mode, int n_offsets, oer_roc** out);
/* Raw per-lambda operating points of a sweep on `data` (not anchored). */
oer_status oer_roc_sweep_points(const oer_dataset* data,
                                const oer_partition* p, const oer_sweep* s,
                                oer_roc** out);
/* Monotone upper envelope with anchors; input points must lie in [0,1]^2. */
oer_status oer_roc_envelope(const oer_roc* curve, oer_roc** out);
/* Upper convex hull of the union of the given curves plus anchors. */
oer_status oer_roc_hull(const oer_roc* const* curves, size_t n, oer_roc** out);
oer_status oer_roc_size(const oer_roc* curve, size_t* out);
/* param receives NaN when the point has no sweep parameter. */
oer_status oer_roc_point(const oer_roc* curve, size_t index, double* fpr,
                         double* tpr, double* param);
/* Trapezoidal area; the curve must be anchored (envelope/hull/fixed). */
oer_status oer_roc_auc(const oer_roc* curve, double* out);
oer_status oer_roc_write_csv(const oer_roc* curve, const char* path);
void oer_roc_free(oer_roc* curve);

/* Empirical rates of "score >= k[bin]" on a dataset. */
oer_status oer_empirical_point(const oer_dataset* data, const oer_partition* p,
                               const oer_thresholds* t, double* fpr,
                               double* tpr);
/* Probability a random positive outscores a random negative (ties half).
 * exact != 0 means full pair counting; otherwise std_error reports the
 * Monte Carlo standard error. */
oer_status oer_auc_pairwise(const oer_dataset* data, uint64_t mc_seed,
                            double* value, int* exact, double* std_error);

/* ---------- feature scoring ---------- */

typedef struct oer_feature_reports oer_feature_reports;

/* sd_denominator 0: product of sigmas; 1: their geometric mean. */
oer_status oer_score_feature(const oer_dataset* data, size_t feature_index,
                             int nbins, int sd_denominator,
                             oer_feature_reports** out);
oer_status oer_rank_features(const oer_dataset* data, int nbins,
                             double sd_variance_min, double prior_variance_min,
                             int sd_denominator, oer_feature_reports** out);
oer_status oer_reports_size(const oer_feature_reports* r, size_t* out);
oer_status oer_reports_get(const oer_feature_reports* r, size_t index,
                           char** name, size_t* feature_index,
                           double* sd_variance, double* prior_variance,
                           double* rank_score, int* accepted);
oer_status oer_reports_write_csv(const oer_feature_reports* r,
                                 const char* path);
void oer_reports_free(oer_feature_reports* r);

/* ---------- cross-validated experiment ---------- */

/* config_json: see the documented schema (partition/fit/solver blocks,
 * lambda_grid_size, baseline_offsets, folds, seed, output_dir,
 * write_fold_curves). Returns the summary as JSON; files are written when
 * output_dir is set. NULL or "" uses the defaults. */
oer_status oer_run_roc_experiment(const oer_dataset* data,
                                  const char* config_json,
                                  char** summary_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OER_H */
