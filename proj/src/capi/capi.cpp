#include "oer/oer.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <span>
#include <sstream>
#include <string>

#include "binning.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "featselect.hpp"
#include "io_util.hpp"
#include "model.hpp"
#include "roc.hpp"
#include "solver.hpp"
#include "synth.hpp"

struct oer_dataset {
  oer::ScoredDataset v;
};
struct oer_partition {
  oer::BinPartition v;
};
struct oer_model {
  oer::BinModel v;
};
struct oer_thresholds {
  oer::ThresholdCurve v;
};
struct oer_sweep {
  std::vector<oer_thresholds> items;
};
struct oer_roc {
  oer::RocCurve v;
};
struct oer_feature_reports {
  std::vector<oer::FeatureReport> v;
};

namespace {

thread_local std::string g_last_error;

oer_status map_code(oer::ErrorCode c) {
  using EC = oer::ErrorCode;
  switch (c) {
    case EC::argument: return OER_ERR_ARGUMENT;
    case EC::parse: return OER_ERR_PARSE;
    case EC::schema: return OER_ERR_SCHEMA;
    case EC::io: return OER_ERR_IO;
    case EC::empty_input: return OER_ERR_EMPTY_INPUT;
    case EC::fit: return OER_ERR_FIT;
    case EC::degenerate: return OER_ERR_DEGENERATE;
    case EC::spec: return OER_ERR_SPEC;
    case EC::internal: return OER_ERR_INTERNAL;
  }
  return OER_ERR_INTERNAL;
}

oer_status fail(oer_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

oer_status fail_arg(const char* msg) { return fail(OER_ERR_ARGUMENT, msg); }

template <typename Fn>
oer_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return OER_OK;
  } catch (const oer::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OER_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OER_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OER_ERR_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

oer::CsvSchema convert_schema(const oer_csv_schema* s) {
  oer::CsvSchema out;
  if (!s) return out;
  if (s->label_col) out.label_col = s->label_col;
  if (s->score_col) out.score_col = s->score_col;
  if (s->aux_cols)
    for (size_t i = 0; i < s->n_aux_cols; ++i) {
      if (!s->aux_cols[i])
        throw oer::Error(oer::ErrorCode::argument, "NULL aux column name");
      out.aux_cols.emplace_back(s->aux_cols[i]);
    }
  if (s->pos_label) out.pos_label = s->pos_label;
  if (s->neg_label) out.neg_label = s->neg_label;
  if (s->delimiter) out.delimiter = s->delimiter;
  return out;
}

oer::BinStats convert_stats(const oer_bin_stats* b) {
  oer::BinStats out;
  out.mu_pos = b->mu_pos;
  out.sigma_pos = b->sigma_pos;
  out.mu_neg = b->mu_neg;
  out.sigma_neg = b->sigma_neg;
  out.p_pos = b->p_pos;
  out.p_neg = b->p_neg;
  out.n_pos = b->n_pos;
  out.n_neg = b->n_neg;
  out.fallback_pos = b->fallback_pos != 0;
  out.fallback_neg = b->fallback_neg != 0;
  if (!(out.sigma_pos > 0.0) || !(out.sigma_neg > 0.0))
    throw oer::Error(oer::ErrorCode::argument, "sigma must be positive");
  if (out.p_pos < 0.0 || out.p_neg < 0.0)
    throw oer::Error(oer::ErrorCode::argument, "negative bin share");
  return out;
}

oer::SolverConfig convert_config(const oer_solver_config* c) {
  oer::SolverConfig out;
  if (!c) return out;
  out.learning_rate = c->learning_rate;
  out.stop_threshold = c->stop_threshold;
  out.max_iterations = c->max_iterations;
  out.clamp = c->clamp;
  switch (c->init_mode) {
    case 0: out.init = oer::InitMode::zero; break;
    case 1: out.init = oer::InitMode::closed_form; break;
    case 2: out.init = oer::InitMode::grid; break;
    default:
      throw oer::Error(oer::ErrorCode::argument, "unknown init_mode");
  }
  return out;
}

}  // namespace

extern "C" {

const char* oer_version(void) { return "0.1.0"; }

const char* oer_last_error(void) { return g_last_error.c_str(); }

void oer_string_free(char* s) { std::free(s); }

/* ---------- datasets ---------- */

oer_status oer_dataset_read_csv(const char* path, const oer_csv_schema* schema,
                                oer_dataset** out) {
  if (!path || !out) return fail_arg("NULL argument");
  return guarded([&] {
    auto* d = new oer_dataset{oer::read_dataset_file(path,
                                                     convert_schema(schema))};
    *out = d;
  });
}

oer_status oer_dataset_parse_csv(const char* text, const oer_csv_schema* schema,
                                 oer_dataset** out) {
  if (!text || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::istringstream in{std::string(text)};
    *out = new oer_dataset{oer::parse_dataset(in, convert_schema(schema))};
  });
}

oer_status oer_dataset_write_csv(const oer_dataset* data, const char* path) {
  if (!data || !path) return fail_arg("NULL argument");
  return guarded([&] { oer::write_dataset_file(path, data->v); });
}

oer_status oer_dataset_synth(const char* example_id, uint64_t n, uint64_t seed,
                             oer_dataset** out) {
  if (!example_id || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::string id(example_id);
    oer::ScoredDataset d;
    if (id == "example1")
      d = oer::gen_example1(n, seed);
    else if (id == "example2")
      d = oer::gen_example2(n, seed);
    else
      throw oer::Error(oer::ErrorCode::argument,
                       "unknown example id '" + id +
                           "' (use example1 or example2)");
    *out = new oer_dataset{std::move(d)};
  });
}

oer_status oer_dataset_size(const oer_dataset* data, size_t* out) {
  if (!data || !out) return fail_arg("NULL argument");
  *out = data->v.size();
  return OER_OK;
}

oer_status oer_dataset_aux_dim(const oer_dataset* data, size_t* out) {
  if (!data || !out) return fail_arg("NULL argument");
  *out = data->v.aux_dim();
  return OER_OK;
}

oer_status oer_dataset_aux_name(const oer_dataset* data, size_t index,
                                char** out) {
  if (!data || !out) return fail_arg("NULL argument");
  return guarded([&] {
    if (index >= data->v.aux_names.size())
      throw oer::Error(oer::ErrorCode::argument, "aux index out of range");
    *out = dup_string(data->v.aux_names[index]);
  });
}

oer_status oer_dataset_counts(const oer_dataset* data, size_t* n_pos,
                              size_t* n_neg) {
  if (!data || !n_pos || !n_neg) return fail_arg("NULL argument");
  *n_pos = data->v.count_label(1);
  *n_neg = data->v.count_label(-1);
  return OER_OK;
}

oer_status oer_dataset_split(const oer_dataset* data, int folds, uint64_t seed,
                             int fold_index, oer_dataset** train,
                             oer_dataset** test) {
  if (!data || !train || !test) return fail_arg("NULL argument");
  return guarded([&] {
    if (fold_index < 0 || fold_index >= folds)
      throw oer::Error(oer::ErrorCode::argument, "fold index out of range");
    auto pairs = oer::split_dataset(data->v, folds, seed);
    auto& fp = pairs[static_cast<std::size_t>(fold_index)];
    *train = new oer_dataset{std::move(fp.train)};
    *test = new oer_dataset{std::move(fp.test)};
  });
}

void oer_dataset_free(oer_dataset* data) { delete data; }

/* ---------- partitions ---------- */

oer_status oer_partition_single_bin(size_t aux_dim, oer_partition** out) {
  if (!out) return fail_arg("NULL argument");
  return guarded(
      [&] { *out = new oer_partition{oer::BinPartition::single_bin(aux_dim)}; });
}

oer_status oer_partition_equal_width(const oer_dataset* data,
                                     const size_t* features, const int* bins,
                                     size_t n_features, oer_partition** out) {
  if (!data || !features || !bins || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<std::size_t> f(features, features + n_features);
    std::vector<int> b(bins, bins + n_features);
    *out = new oer_partition{oer::make_equal_width_partition(data->v, f, b)};
  });
}

oer_status oer_partition_uniform(size_t aux_dim, const size_t* features,
                                 const int* bins, const double* lows,
                                 const double* highs, size_t n_features,
                                 oer_partition** out) {
  if (!features || !bins || !lows || !highs || !out)
    return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<std::size_t> f(features, features + n_features);
    std::vector<int> b(bins, bins + n_features);
    std::vector<double> lo(lows, lows + n_features);
    std::vector<double> hi(highs, highs + n_features);
    *out = new oer_partition{
        oer::make_uniform_partition(aux_dim, f, b, lo, hi)};
  });
}

oer_status oer_partition_quantile(const oer_dataset* data,
                                  const size_t* features, const int* bins,
                                  size_t n_features, char** warnings_out,
                                  oer_partition** out) {
  if (!data || !features || !bins || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<std::size_t> f(features, features + n_features);
    std::vector<int> b(bins, bins + n_features);
    std::vector<std::string> warnings;
    auto part = oer::make_quantile_partition(data->v, f, b, &warnings);
    if (warnings_out) {
      std::string joined;
      for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i) joined += '\n';
        joined += warnings[i];
      }
      *warnings_out = dup_string(joined);
    }
    *out = new oer_partition{std::move(part)};
  });
}

oer_status oer_partition_bin_count(const oer_partition* p, size_t* out) {
  if (!p || !out) return fail_arg("NULL argument");
  *out = p->v.bin_count();
  return OER_OK;
}

oer_status oer_partition_aux_dim(const oer_partition* p, size_t* out) {
  if (!p || !out) return fail_arg("NULL argument");
  *out = p->v.aux_dim();
  return OER_OK;
}

oer_status oer_partition_assign(const oer_partition* p, const double* aux,
                                size_t dim, size_t* out) {
  if (!p || !out || (!aux && dim > 0)) return fail_arg("NULL argument");
  return guarded(
      [&] { *out = p->v.assign(std::span<const double>(aux, dim)); });
}

oer_status oer_partition_describe_bin(const oer_partition* p, size_t bin,
                                      const char* const* names, size_t n_names,
                                      char** out) {
  if (!p || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<std::string> nm;
    if (names)
      for (size_t i = 0; i < n_names; ++i)
        nm.emplace_back(names[i] ? names[i] : "");
    *out = dup_string(p->v.describe_bin(bin, nm));
  });
}

oer_status oer_partition_to_json(const oer_partition* p, char** out) {
  if (!p || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = dup_string(p->v.to_json()); });
}

oer_status oer_partition_from_json(const char* text, oer_partition** out) {
  if (!text || !out) return fail_arg("NULL argument");
  return guarded(
      [&] { *out = new oer_partition{oer::BinPartition::from_json(text)}; });
}

void oer_partition_free(oer_partition* p) { delete p; }

/* ---------- models ---------- */

oer_status oer_model_fit(const oer_dataset* data, const oer_partition* p,
                         int min_count, double sigma_floor, int equal_variance,
                         oer_model** out) {
  if (!data || !p || !out) return fail_arg("NULL argument");
  return guarded([&] {
    oer::FitOptions opts;
    opts.min_count = min_count;
    opts.sigma_floor = sigma_floor;
    opts.equal_variance = equal_variance != 0;
    *out = new oer_model{oer::fit_bin_model(data->v, p->v, opts)};
  });
}

oer_status oer_model_bin_count(const oer_model* m, size_t* out) {
  if (!m || !out) return fail_arg("NULL argument");
  *out = m->v.bin_count();
  return OER_OK;
}

oer_status oer_model_bin_stats(const oer_model* m, size_t bin,
                               oer_bin_stats* out) {
  if (!m || !out) return fail_arg("NULL argument");
  return guarded([&] {
    const oer::BinStats& b = m->v.stats(bin);
    out->mu_pos = b.mu_pos;
    out->sigma_pos = b.sigma_pos;
    out->mu_neg = b.mu_neg;
    out->sigma_neg = b.sigma_neg;
    out->p_pos = b.p_pos;
    out->p_neg = b.p_neg;
    out->n_pos = b.n_pos;
    out->n_neg = b.n_neg;
    out->fallback_pos = b.fallback_pos ? 1 : 0;
    out->fallback_neg = b.fallback_neg ? 1 : 0;
  });
}

oer_status oer_model_is_equal_variance(const oer_model* m, int* out) {
  if (!m || !out) return fail_arg("NULL argument");
  *out = m->v.is_equal_variance() ? 1 : 0;
  return OER_OK;
}

oer_status oer_model_to_json(const oer_model* m, char** out) {
  if (!m || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = dup_string(m->v.to_json()); });
}

oer_status oer_model_from_json(const char* text, oer_model** out) {
  if (!text || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = new oer_model{oer::BinModel::from_json(text)}; });
}

oer_status oer_model_save(const oer_model* m, const char* path) {
  if (!m || !path) return fail_arg("NULL argument");
  return guarded([&] { m->v.save(path); });
}

oer_status oer_model_load(const char* path, oer_model** out) {
  if (!path || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = new oer_model{oer::BinModel::load(path)}; });
}

void oer_model_free(oer_model* m) { delete m; }

oer_status oer_gaussian_density(double x, double mu, double sigma,
                                double* out) {
  if (!out) return fail_arg("NULL argument");
  return guarded([&] { *out = oer::gaussian_density(x, mu, sigma); });
}

oer_status oer_gaussian_cdf(double x, double mu, double sigma, double* out) {
  if (!out) return fail_arg("NULL argument");
  return guarded([&] { *out = oer::gaussian_cdf(x, mu, sigma); });
}

/* ---------- solving ---------- */

void oer_solver_config_default(oer_solver_config* out) {
  if (!out) return;
  oer::SolverConfig d;
  out->learning_rate = d.learning_rate;
  out->stop_threshold = d.stop_threshold;
  out->max_iterations = d.max_iterations;
  out->clamp = d.clamp;
  out->init_mode = 1;
}

oer_status oer_solve(const oer_model* m, double lambda,
                     const oer_solver_config* config, oer_thresholds** out) {
  if (!m || !out) return fail_arg("NULL argument");
  return guarded([&] {
    *out = new oer_thresholds{
        oer::solve_gradient(m->v, lambda, convert_config(config))};
  });
}

oer_status oer_solve_closed_form(const oer_model* m, double lambda_log,
                                 const oer_solver_config* config,
                                 oer_thresholds** out) {
  if (!m || !out) return fail_arg("NULL argument");
  return guarded([&] {
    *out = new oer_thresholds{
        oer::solve_closed_form(m->v, lambda_log, convert_config(config))};
  });
}

oer_status oer_thresholds_info(const oer_thresholds* t, size_t* bins,
                               double* lambda, double* clamp, int* converged,
                               long* iterations) {
  if (!t) return fail_arg("NULL argument");
  if (bins) *bins = t->v.thresholds.size();
  if (lambda) *lambda = t->v.lambda;
  if (clamp) *clamp = t->v.clamp;
  if (converged) *converged = t->v.converged ? 1 : 0;
  if (iterations) *iterations = t->v.iterations;
  return OER_OK;
}

oer_status oer_thresholds_bin(const oer_thresholds* t, size_t bin, double* k,
                              int* converged) {
  if (!t) return fail_arg("NULL argument");
  if (bin >= t->v.thresholds.size())
    return fail_arg("bin index out of range");
  if (k) *k = t->v.thresholds[bin];
  if (converged) *converged = t->v.bin_converged[bin] ? 1 : 0;
  return OER_OK;
}

oer_status oer_thresholds_values(const oer_thresholds* t, double* buf,
                                 size_t buflen) {
  if (!t || !buf) return fail_arg("NULL argument");
  if (buflen < t->v.thresholds.size())
    return fail_arg("buffer too small for threshold vector");
  for (std::size_t i = 0; i < t->v.thresholds.size(); ++i)
    buf[i] = t->v.thresholds[i];
  return OER_OK;
}

void oer_thresholds_free(oer_thresholds* t) { delete t; }

oer_status oer_benefit_cost_ratio(const oer_bin_stats* bin, double k,
                                  double* out) {
  if (!bin || !out) return fail_arg("NULL argument");
  return guarded(
      [&] { *out = oer::benefit_cost_ratio(convert_stats(bin), k); });
}

oer_status oer_grid_oracle(const oer_bin_stats* bin, double lambda,
                           double clamp, int resolution, double* out) {
  if (!bin || !out) return fail_arg("NULL argument");
  return guarded([&] {
    *out = oer::grid_oracle(convert_stats(bin), lambda, clamp, resolution);
  });
}

oer_status oer_predicted_point(const oer_model* m, const oer_thresholds* t,
                               double* fpr, double* tpr) {
  if (!m || !t || !fpr || !tpr) return fail_arg("NULL argument");
  return guarded([&] {
    oer::PredictedPoint p = oer::predicted_operating_point(m->v, t->v);
    *fpr = p.fpr;
    *tpr = p.tpr;
  });
}

oer_status oer_sweep_lambdas(const oer_model* m, const double* lambdas,
                             size_t n, const oer_solver_config* config,
                             oer_sweep** out) {
  if (!m || !lambdas || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<double> grid(lambdas, lambdas + n);
    auto curves = oer::sweep_lambda(m->v, grid, convert_config(config));
    auto* s = new oer_sweep;
    s->items.reserve(curves.size());
    for (auto& c : curves) s->items.push_back(oer_thresholds{std::move(c)});
    *out = s;
  });
}

oer_status oer_sweep_auto(const oer_model* m, const oer_dataset* train,
                          int grid_size, const oer_solver_config* config,
                          oer_sweep** out) {
  if (!m || !train || !out) return fail_arg("NULL argument");
  return guarded([&] {
    auto grid = oer::auto_lambda_grid(m->v, train->v, grid_size);
    auto curves = oer::sweep_lambda(m->v, grid, convert_config(config));
    auto* s = new oer_sweep;
    s->items.reserve(curves.size());
    for (auto& c : curves) s->items.push_back(oer_thresholds{std::move(c)});
    *out = s;
  });
}

oer_status oer_sweep_size(const oer_sweep* s, size_t* out) {
  if (!s || !out) return fail_arg("NULL argument");
  *out = s->items.size();
  return OER_OK;
}

oer_status oer_sweep_get(const oer_sweep* s, size_t index,
                         const oer_thresholds** out) {
  if (!s || !out) return fail_arg("NULL argument");
  if (index >= s->items.size()) return fail_arg("sweep index out of range");
  *out = &s->items[index];
  return OER_OK;
}

oer_status oer_sweep_write_csv(const oer_sweep* s, const oer_model* m,
                               const char* path) {
  if (!s || !m || !path) return fail_arg("NULL argument");
  return guarded([&] {
    std::ostringstream os;
    os << "lambda,bin,threshold,converged,predicted_fpr,predicted_tpr\n";
    char buf[64];
    for (const auto& item : s->items) {
      oer::PredictedPoint pred =
          oer::predicted_operating_point(m->v, item.v);
      for (std::size_t i = 0; i < item.v.thresholds.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", item.v.lambda);
        os << buf << ',' << i << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", item.v.thresholds[i]);
        os << buf << ',' << (item.v.bin_converged[i] ? 1 : 0) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", pred.fpr);
        os << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", pred.tpr);
        os << buf << '\n';
      }
    }
    oer::atomic_write_text(path, os.str());
  });
}

void oer_sweep_free(oer_sweep* s) { delete s; }

/* ---------- ROC ---------- */

oer_status oer_roc_fixed(const oer_dataset* data, oer_roc** out) {
  if (!data || !out) return fail_arg("NULL argument");
  return guarded(
      [&] { *out = new oer_roc{oer::fixed_threshold_curve(data->v)}; });
}

oer_status oer_roc_baseline(const oer_dataset* data, const oer_model* m,
                            int mode, int n_offsets, oer_roc** out) {
  if (!data || !m || !out) return fail_arg("NULL argument");
  if (mode != 0 && mode != 1)
    return fail_arg("mode must be 0 (constant-fpr) or 1 (constant-tpr)");
  return guarded([&] {
    *out = new oer_roc{oer::offset_baseline_curve(
        data->v, m->v,
        mode == 0 ? oer::BaselineMode::constant_fpr
                  : oer::BaselineMode::constant_tpr,
        n_offsets)};
  });
}

oer_status oer_roc_sweep_points(const oer_dataset* data,
                                const oer_partition* p, const oer_sweep* s,
                                oer_roc** out) {
  if (!data || !p || !s || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<oer::ThresholdCurve> curves;
    curves.reserve(s->items.size());
    for (const auto& item : s->items) curves.push_back(item.v);
    *out = new oer_roc{oer::oer_empirical_curve(data->v, p->v, curves)};
  });
}

oer_status oer_roc_envelope(const oer_roc* curve, oer_roc** out) {
  if (!curve || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = new oer_roc{oer::upper_envelope(curve->v)}; });
}

oer_status oer_roc_hull(const oer_roc* const* curves, size_t n, oer_roc** out) {
  if (!curves || !out) return fail_arg("NULL argument");
  return guarded([&] {
    std::vector<oer::RocCurve> cs;
    for (size_t i = 0; i < n; ++i) {
      if (!curves[i])
        throw oer::Error(oer::ErrorCode::argument, "NULL curve in list");
      cs.push_back(curves[i]->v);
    }
    *out = new oer_roc{oer::rocch(cs)};
  });
}

oer_status oer_roc_size(const oer_roc* curve, size_t* out) {
  if (!curve || !out) return fail_arg("NULL argument");
  *out = curve->v.points.size();
  return OER_OK;
}

oer_status oer_roc_point(const oer_roc* curve, size_t index, double* fpr,
                         double* tpr, double* param) {
  if (!curve) return fail_arg("NULL argument");
  if (index >= curve->v.points.size())
    return fail_arg("point index out of range");
  const auto& p = curve->v.points[index];
  if (fpr) *fpr = p.fpr;
  if (tpr) *tpr = p.tpr;
  if (param)
    *param = p.param ? *p.param : std::numeric_limits<double>::quiet_NaN();
  return OER_OK;
}

oer_status oer_roc_auc(const oer_roc* curve, double* out) {
  if (!curve || !out) return fail_arg("NULL argument");
  return guarded([&] { *out = oer::auc(curve->v); });
}

oer_status oer_roc_write_csv(const oer_roc* curve, const char* path) {
  if (!curve || !path) return fail_arg("NULL argument");
  return guarded([&] { oer::write_curve_csv(path, curve->v); });
}

void oer_roc_free(oer_roc* curve) { delete curve; }

oer_status oer_empirical_point(const oer_dataset* data, const oer_partition* p,
                               const oer_thresholds* t, double* fpr,
                               double* tpr) {
  if (!data || !p || !t || !fpr || !tpr) return fail_arg("NULL argument");
  return guarded([&] {
    oer::OperatingPoint pt = oer::empirical_point(data->v, p->v, t->v);
    *fpr = pt.fpr;
    *tpr = pt.tpr;
  });
}

oer_status oer_auc_pairwise(const oer_dataset* data, uint64_t mc_seed,
                            double* value, int* exact, double* std_error) {
  if (!data || !value) return fail_arg("NULL argument");
  return guarded([&] {
    oer::PairwiseAuc r = oer::auc_pairwise(data->v, {}, mc_seed);
    *value = r.value;
    if (exact) *exact = r.exact ? 1 : 0;
    if (std_error) *std_error = r.std_error;
  });
}

/* ---------- feature scoring ---------- */

oer_status oer_score_feature(const oer_dataset* data, size_t feature_index,
                             int nbins, int sd_denominator,
                             oer_feature_reports** out) {
  if (!data || !out) return fail_arg("NULL argument");
  if (sd_denominator != 0 && sd_denominator != 1)
    return fail_arg("sd_denominator must be 0 (product) or 1 (geometric mean)");
  return guarded([&] {
    oer::FeatureScoreOptions opts;
    opts.sd_denominator = sd_denominator == 0
                              ? oer::SdDenominator::product
                              : oer::SdDenominator::geometric_mean;
    auto* r = new oer_feature_reports;
    r->v.push_back(oer::score_feature(data->v, feature_index, nbins, opts));
    *out = r;
  });
}

oer_status oer_rank_features(const oer_dataset* data, int nbins,
                             double sd_variance_min, double prior_variance_min,
                             int sd_denominator, oer_feature_reports** out) {
  if (!data || !out) return fail_arg("NULL argument");
  if (sd_denominator != 0 && sd_denominator != 1)
    return fail_arg("sd_denominator must be 0 (product) or 1 (geometric mean)");
  return guarded([&] {
    oer::FeatureScoreOptions opts;
    opts.sd_denominator = sd_denominator == 0
                              ? oer::SdDenominator::product
                              : oer::SdDenominator::geometric_mean;
    auto* r = new oer_feature_reports;
    r->v = oer::rank_features(data->v, nbins, sd_variance_min,
                              prior_variance_min, opts);
    *out = r;
  });
}

oer_status oer_reports_size(const oer_feature_reports* r, size_t* out) {
  if (!r || !out) return fail_arg("NULL argument");
  *out = r->v.size();
  return OER_OK;
}

oer_status oer_reports_get(const oer_feature_reports* r, size_t index,
                           char** name, size_t* feature_index,
                           double* sd_variance, double* prior_variance,
                           double* rank_score, int* accepted) {
  if (!r) return fail_arg("NULL argument");
  if (index >= r->v.size()) return fail_arg("report index out of range");
  return guarded([&] {
    const auto& rep = r->v[index];
    if (name) *name = dup_string(rep.name);
    if (feature_index) *feature_index = rep.feature_index;
    if (sd_variance) *sd_variance = rep.sd_variance;
    if (prior_variance) *prior_variance = rep.prior_variance;
    if (rank_score) *rank_score = rep.rank_score;
    if (accepted) *accepted = rep.accepted ? 1 : 0;
  });
}

oer_status oer_reports_write_csv(const oer_feature_reports* r,
                                 const char* path) {
  if (!r || !path) return fail_arg("NULL argument");
  return guarded([&] { oer::write_reports_csv(path, r->v); });
}

void oer_reports_free(oer_feature_reports* r) { delete r; }

/* ---------- experiment ---------- */

oer_status oer_run_roc_experiment(const oer_dataset* data,
                                  const char* config_json,
                                  char** summary_json_out) {
  if (!data || !summary_json_out) return fail_arg("NULL argument");
  return guarded([&] {
    oer::ExperimentConfig cfg;
    if (config_json && config_json[0] != '\0')
      cfg = oer::experiment_config_from_json(config_json);
    oer::ExperimentResult res = oer::run_roc_experiment(data->v, cfg);
    *summary_json_out = dup_string(oer::experiment_summary_json(res));
  });
}

} /* extern "C" */
