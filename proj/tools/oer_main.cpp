// Command-line front end. Talks to the library exclusively through the
// public C API, so it doubles as a smoke test of that surface.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oer/oer.h"

namespace {

using nlohmann::json;

// Owning handle for one API object.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p) Free(p);
  }
  T** out() { return &p; }
  operator T*() const { return p; }
};

using DatasetH = Handle<oer_dataset, oer_dataset_free>;
using PartitionH = Handle<oer_partition, oer_partition_free>;
using ModelH = Handle<oer_model, oer_model_free>;
using ThresholdsH = Handle<oer_thresholds, oer_thresholds_free>;
using SweepH = Handle<oer_sweep, oer_sweep_free>;
using RocH = Handle<oer_roc, oer_roc_free>;
using ReportsH = Handle<oer_feature_reports, oer_reports_free>;

struct ApiString {
  char* p = nullptr;
  ~ApiString() {
    if (p) oer_string_free(p);
  }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

int api_fail() {
  std::fprintf(stderr, "error: %s\n", oer_last_error());
  return 1;
}

#define CHECK(call)                 \
  do {                              \
    if ((call) != OER_OK) return api_fail(); \
  } while (0)

// Applies config-file values to options the user did not set on the
// command line: flags win over the file, the file wins over defaults.
struct ConfigBinder {
  std::vector<std::function<void(const json&)>> appliers;

  template <typename T>
  void bind(CLI::Option* opt, std::string key, T& var) {
    appliers.push_back([opt, key = std::move(key), &var](const json& j) {
      if (opt->count() == 0 && j.contains(key)) var = j.at(key).get<T>();
    });
  }

  void apply(const json& j) {
    for (auto& f : appliers) f(j);
  }
};

int load_config(const std::string& path, ConfigBinder& binder) {
  if (path.empty()) return 0;
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open config file '%s'\n",
                 path.c_str());
    return 1;
  }
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: config file '%s': %s\n", path.c_str(),
                 e.what());
    return 1;
  }
  binder.apply(j);
  return 0;
}

struct SchemaFlags {
  std::string label_col;
  std::string score_col;
  std::vector<std::string> aux_cols;
  std::string pos_label;
  std::string neg_label;
  std::string delimiter;

  void add_options(CLI::App* cmd, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--label-col", label_col,
                                "Label column name (default: label)"),
                "label_col", label_col);
    binder.bind(cmd->add_option("--score-col", score_col,
                                "Score column name (default: score)"),
                "score_col", score_col);
    binder.bind(cmd->add_option("--aux-cols", aux_cols,
                                "Auxiliary columns (default: all others)")
                    ->delimiter(','),
                "aux_cols", aux_cols);
    binder.bind(cmd->add_option("--pos-label", pos_label,
                                "Positive label text (default: 1)"),
                "pos_label", pos_label);
    binder.bind(cmd->add_option("--neg-label", neg_label,
                                "Negative label text (default: -1)"),
                "neg_label", neg_label);
    binder.bind(cmd->add_option("--delimiter", delimiter,
                                "Field delimiter (default: ,; '\\t' for tab)"),
                "delimiter", delimiter);
  }

  // Pointers feed the C struct; keep this object alive across the call.
  oer_csv_schema to_c(std::vector<const char*>& aux_ptrs) const {
    oer_csv_schema s{};
    s.label_col = label_col.empty() ? nullptr : label_col.c_str();
    s.score_col = score_col.empty() ? nullptr : score_col.c_str();
    aux_ptrs.clear();
    for (const auto& c : aux_cols) aux_ptrs.push_back(c.c_str());
    s.aux_cols = aux_ptrs.empty() ? nullptr : aux_ptrs.data();
    s.n_aux_cols = aux_ptrs.size();
    s.pos_label = pos_label.empty() ? nullptr : pos_label.c_str();
    s.neg_label = neg_label.empty() ? nullptr : neg_label.c_str();
    if (delimiter == "\\t")
      s.delimiter = '\t';
    else if (!delimiter.empty())
      s.delimiter = delimiter[0];
    return s;
  }
};

struct PartitionFlags {
  std::string strategy = "equal_width";
  std::vector<size_t> features{0};
  std::vector<int> bins{8};
  std::vector<std::string> ranges;  // "low:high" per feature

  void add_options(CLI::App* cmd, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--strategy", strategy,
                                "Partition strategy: equal_width, quantile, "
                                "uniform (default: equal_width)"),
                "strategy", strategy);
    binder.bind(cmd->add_option("--features", features,
                                "Auxiliary feature indices to bin on "
                                "(default: 0)")
                    ->delimiter(','),
                "features", features);
    binder.bind(cmd->add_option("--bins", bins,
                                "Interior bin count per listed feature "
                                "(default: 8)")
                    ->delimiter(','),
                "bins", bins);
    binder.bind(cmd->add_option("--ranges", ranges,
                                "uniform strategy: low:high per feature")
                    ->delimiter(','),
                "ranges", ranges);
  }

  int parse_ranges(std::vector<double>& lows, std::vector<double>& highs) const {
    lows.clear();
    highs.clear();
    for (const auto& r : ranges) {
      auto colon = r.find(':');
      if (colon == std::string::npos) {
        std::fprintf(stderr, "error: range '%s' is not low:high\n", r.c_str());
        return 1;
      }
      try {
        lows.push_back(std::stod(r.substr(0, colon)));
        highs.push_back(std::stod(r.substr(colon + 1)));
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: range '%s' is not numeric\n", r.c_str());
        return 1;
      }
    }
    return 0;
  }

  int build(const oer_dataset* data, PartitionH& part) const {
    if (bins.size() != features.size()) {
      std::fprintf(stderr,
                   "error: --bins needs one entry per --features entry\n");
      return 1;
    }
    if (strategy == "equal_width") {
      CHECK(oer_partition_equal_width(data, features.data(), bins.data(),
                                      features.size(), part.out()));
    } else if (strategy == "quantile") {
      ApiString warnings;
      CHECK(oer_partition_quantile(data, features.data(), bins.data(),
                                   features.size(), warnings.out(),
                                   part.out()));
      if (warnings.p && warnings.p[0])
        std::fprintf(stderr, "warning: %s\n", warnings.p);
    } else if (strategy == "uniform") {
      std::vector<double> lows, highs;
      if (int rc = parse_ranges(lows, highs)) return rc;
      size_t aux_dim = 0;
      CHECK(oer_dataset_aux_dim(data, &aux_dim));
      CHECK(oer_partition_uniform(aux_dim, features.data(), bins.data(),
                                  lows.data(), highs.data(), features.size(),
                                  part.out()));
    } else {
      std::fprintf(stderr, "error: unknown strategy '%s'\n", strategy.c_str());
      return 1;
    }
    return 0;
  }
};

struct FitFlags {
  int min_count = 5;
  double sigma_floor = 0.0;
  bool equal_variance = false;

  void add_options(CLI::App* cmd, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--min-count", min_count,
                                "Per-class sample floor before a bin borrows "
                                "the pooled fit (default: 5)"),
                "min_count", min_count);
    binder.bind(cmd->add_option("--sigma-floor", sigma_floor,
                                "Lower bound on fitted sigmas; <= 0 derives "
                                "one from the pooled spread"),
                "sigma_floor", sigma_floor);
    binder.bind(cmd->add_flag("--equal-variance", equal_variance,
                              "Pool the two class sigmas in every bin"),
                "equal_variance", equal_variance);
  }
};

struct SolverFlags {
  double learning_rate = 0.1;
  double stop_threshold = 0.0;
  long max_iterations = 100000;
  double clamp = 0.0;
  std::string init = "closed_form";

  void add_options(CLI::App* cmd, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--learning-rate", learning_rate,
                                "Iteration step scale (default: 0.1)"),
                "learning_rate", learning_rate);
    binder.bind(cmd->add_option("--stop-threshold", stop_threshold,
                                "Residual target; <= 0 picks a size-scaled "
                                "default"),
                "stop_threshold", stop_threshold);
    binder.bind(cmd->add_option("--max-iterations", max_iterations,
                                "Iteration cap (default: 100000)"),
                "max_iterations", max_iterations);
    binder.bind(cmd->add_option("--clamp", clamp,
                                "Threshold bound K; <= 0 derives one from "
                                "the model"),
                "clamp", clamp);
    binder.bind(cmd->add_option("--init", init,
                                "Start point: zero, closed_form, grid "
                                "(default: closed_form)"),
                "init", init);
  }

  int to_c(oer_solver_config& cfg) const {
    oer_solver_config_default(&cfg);
    cfg.learning_rate = learning_rate;
    cfg.stop_threshold = stop_threshold;
    cfg.max_iterations = max_iterations;
    cfg.clamp = clamp;
    if (init == "zero")
      cfg.init_mode = 0;
    else if (init == "closed_form")
      cfg.init_mode = 1;
    else if (init == "grid")
      cfg.init_mode = 2;
    else {
      std::fprintf(stderr, "error: unknown init mode '%s'\n", init.c_str());
      return 1;
    }
    return 0;
  }
};

int read_dataset(const std::string& path, const SchemaFlags& schema,
                 DatasetH& data) {
  if (path.empty()) {
    std::fprintf(stderr,
                 "error: no input dataset (--input or config \"input\")\n");
    return 1;
  }
  std::vector<const char*> aux_ptrs;
  oer_csv_schema s = schema.to_c(aux_ptrs);
  CHECK(oer_dataset_read_csv(path.c_str(), &s, data.out()));
  return 0;
}

int write_text_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
      std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
      fs::remove(tmp, ec);
      return 1;
    }
  }
  fs::rename(tmp, p, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot replace '%s': %s\n", path.c_str(),
                 ec.message().c_str());
    fs::remove(tmp, ec);
    return 1;
  }
  return 0;
}

/* ---------- synth ---------- */

struct SynthArgs {
  std::string example;
  uint64_t n = 20000;
  uint64_t seed = 1;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  DatasetH data;
  CHECK(oer_dataset_synth(a.example.c_str(), a.n, a.seed, data.out()));
  CHECK(oer_dataset_write_csv(data, a.out.c_str()));
  size_t n_pos = 0, n_neg = 0;
  CHECK(oer_dataset_counts(data, &n_pos, &n_neg));
  std::fprintf(stderr, "wrote %zu samples (%zu positive, %zu negative) to %s\n",
               n_pos + n_neg, n_pos, n_neg, a.out.c_str());
  return 0;
}

/* ---------- fit ---------- */

struct FitArgs {
  std::string input;
  std::string out;
  SchemaFlags schema;
  PartitionFlags partition;
  FitFlags fit;
};

int run_fit(const FitArgs& a) {
  DatasetH data;
  if (int rc = read_dataset(a.input, a.schema, data)) return rc;
  PartitionH part;
  if (int rc = a.partition.build(data, part)) return rc;

  ModelH model;
  CHECK(oer_model_fit(data, part, a.fit.min_count, a.fit.sigma_floor,
                      a.fit.equal_variance ? 1 : 0, model.out()));
  if (!a.out.empty()) CHECK(oer_model_save(model, a.out.c_str()));

  size_t aux_dim = 0, bins = 0;
  CHECK(oer_dataset_aux_dim(data, &aux_dim));
  CHECK(oer_model_bin_count(model, &bins));
  std::vector<std::string> names;
  std::vector<const char*> name_ptrs;
  for (size_t i = 0; i < aux_dim; ++i) {
    ApiString nm;
    CHECK(oer_dataset_aux_name(data, i, nm.out()));
    names.push_back(nm.str());
  }
  for (const auto& n : names) name_ptrs.push_back(n.c_str());

  std::printf("bins: %zu\n", bins);
  std::printf("%-4s %-28s %8s %8s %10s %10s %10s %10s %9s %9s %s\n", "bin",
              "cell", "n+", "n-", "mu+", "sigma+", "mu-", "sigma-", "p+", "p-",
              "notes");
  for (size_t i = 0; i < bins; ++i) {
    ApiString cell;
    CHECK(oer_partition_describe_bin(part, i,
                                     name_ptrs.empty() ? nullptr
                                                       : name_ptrs.data(),
                                     name_ptrs.size(), cell.out()));
    oer_bin_stats st{};
    CHECK(oer_model_bin_stats(model, i, &st));
    std::string notes;
    if (st.fallback_pos) notes += "pooled+";
    if (st.fallback_neg) notes += notes.empty() ? "pooled-" : " pooled-";
    std::printf("%-4zu %-28s %8llu %8llu %10.5f %10.5f %10.5f %10.5f %9.5f "
                "%9.5f %s\n",
                i, cell.str().c_str(),
                static_cast<unsigned long long>(st.n_pos),
                static_cast<unsigned long long>(st.n_neg), st.mu_pos,
                st.sigma_pos, st.mu_neg, st.sigma_neg, st.p_pos, st.p_neg,
                notes.c_str());
  }
  if (!a.out.empty())
    std::fprintf(stderr, "model written to %s\n", a.out.c_str());
  return 0;
}

/* ---------- select ---------- */

struct SelectArgs {
  std::string input;
  std::string out;
  SchemaFlags schema;
  int nbins = 8;
  double sd_min = 0.05;
  double prior_min = 0.05;
  bool geomean = false;
};

int run_select(const SelectArgs& a) {
  DatasetH data;
  if (int rc = read_dataset(a.input, a.schema, data)) return rc;
  ReportsH reports;
  CHECK(oer_rank_features(data, a.nbins, a.sd_min, a.prior_min,
                          a.geomean ? 1 : 0, reports.out()));
  size_t n = 0;
  CHECK(oer_reports_size(reports, &n));
  std::printf("%-20s %6s %14s %14s %12s %s\n", "feature", "index",
              "sd_variance", "prior_variance", "rank_score", "accepted");
  for (size_t i = 0; i < n; ++i) {
    ApiString name;
    size_t index = 0;
    double sd_var = 0, prior_var = 0, rank = 0;
    int accepted = 0;
    CHECK(oer_reports_get(reports, i, name.out(), &index, &sd_var, &prior_var,
                          &rank, &accepted));
    std::printf("%-20s %6zu %14.6g %14.6g %12.6g %s\n", name.str().c_str(),
                index, sd_var, prior_var, rank, accepted ? "yes" : "no");
  }
  if (!a.out.empty()) {
    CHECK(oer_reports_write_csv(reports, a.out.c_str()));
    std::fprintf(stderr, "report written to %s\n", a.out.c_str());
  }
  return 0;
}

/* ---------- sweep ---------- */

struct SweepArgs {
  std::string model_path;
  std::string input;  // optional dataset for the automatic grid
  std::string out;
  SchemaFlags schema;
  SolverFlags solver;
  std::vector<double> lambdas;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int grid_size = 200;
};

int run_sweep(const SweepArgs& a) {
  if (a.model_path.empty()) {
    std::fprintf(stderr,
                 "error: no model file (--model or config \"model\")\n");
    return 1;
  }
  ModelH model;
  CHECK(oer_model_load(a.model_path.c_str(), model.out()));
  oer_solver_config cfg;
  if (int rc = a.solver.to_c(cfg)) return rc;

  SweepH sweep;
  if (!a.lambdas.empty()) {
    CHECK(oer_sweep_lambdas(model, a.lambdas.data(), a.lambdas.size(), &cfg,
                            sweep.out()));
  } else if (a.lambda_min > 0.0 && a.lambda_max > 0.0) {
    if (a.lambda_max < a.lambda_min) {
      std::fprintf(stderr, "error: --lambda-max below --lambda-min\n");
      return 1;
    }
    std::vector<double> grid;
    int g = a.grid_size < 1 ? 1 : a.grid_size;
    double lo = std::log(a.lambda_min), hi = std::log(a.lambda_max);
    for (int i = 0; i < g; ++i)
      grid.push_back(std::exp(
          g == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (g - 1)));
    CHECK(oer_sweep_lambdas(model, grid.data(), grid.size(), &cfg,
                            sweep.out()));
  } else if (!a.input.empty()) {
    DatasetH data;
    if (int rc = read_dataset(a.input, a.schema, data)) return rc;
    CHECK(oer_sweep_auto(model, data, a.grid_size, &cfg, sweep.out()));
  } else {
    std::fprintf(stderr,
                 "error: need --lambdas, --lambda-min/--lambda-max, or "
                 "--input for the automatic grid\n");
    return 1;
  }

  if (!a.out.empty()) {
    CHECK(oer_sweep_write_csv(sweep, model, a.out.c_str()));
    std::fprintf(stderr, "thresholds written to %s\n", a.out.c_str());
    return 0;
  }
  size_t n = 0;
  CHECK(oer_sweep_size(sweep, &n));
  std::printf("lambda,bin,threshold,converged\n");
  for (size_t i = 0; i < n; ++i) {
    const oer_thresholds* t = nullptr;
    CHECK(oer_sweep_get(sweep, i, &t));
    size_t bins = 0;
    double lambda = 0;
    CHECK(oer_thresholds_info(t, &bins, &lambda, nullptr, nullptr, nullptr));
    for (size_t b = 0; b < bins; ++b) {
      double k = 0;
      int conv = 0;
      CHECK(oer_thresholds_bin(t, b, &k, &conv));
      std::printf("%.17g,%zu,%.17g,%d\n", lambda, b, k, conv);
    }
  }
  return 0;
}

/* ---------- roc ---------- */

struct RocArgs {
  std::string input;
  std::string out_dir;
  SchemaFlags schema;
  PartitionFlags partition;
  FitFlags fit;
  SolverFlags solver;
  int lambda_grid_size = 200;
  int baseline_offsets = 512;
  int folds = 10;
  uint64_t seed = 1;
  bool fold_curves = true;
  std::vector<int> bin_sweep;
};

json experiment_json(const RocArgs& a, const std::vector<int>& bins,
                     const std::string& out_dir) {
  json j;
  j["partition"]["strategy"] =
      a.partition.strategy == "uniform" ? "uniform" : a.partition.strategy;
  j["partition"]["features"] = a.partition.features;
  j["partition"]["bins"] = bins;
  if (!a.partition.ranges.empty()) {
    std::vector<double> lows, highs;
    if (a.partition.parse_ranges(lows, highs) == 0) {
      json ranges = json::array();
      for (size_t i = 0; i < lows.size(); ++i)
        ranges.push_back({lows[i], highs[i]});
      j["partition"]["ranges"] = ranges;
    }
  }
  j["fit"]["min_count"] = a.fit.min_count;
  j["fit"]["sigma_floor"] = a.fit.sigma_floor;
  j["fit"]["equal_variance"] = a.fit.equal_variance;
  j["solver"]["learning_rate"] = a.solver.learning_rate;
  j["solver"]["stop_threshold"] = a.solver.stop_threshold;
  j["solver"]["max_iterations"] = a.solver.max_iterations;
  j["solver"]["clamp"] = a.solver.clamp;
  j["solver"]["init"] = a.solver.init;
  j["lambda_grid_size"] = a.lambda_grid_size;
  j["baseline_offsets"] = a.baseline_offsets;
  j["folds"] = a.folds;
  j["seed"] = a.seed;
  j["output_dir"] = out_dir;
  j["write_fold_curves"] = a.fold_curves;
  return j;
}

void print_summary(const json& s) {
  std::printf("%-18s %10s %10s\n", "method", "auc_mean", "auc_std");
  for (const char* m : {"oer", "fixed", "constant_fpr", "constant_tpr",
                        "rocch_baselines"}) {
    const json& v = s["methods"][m];
    std::printf("%-18s %10.6f %10.6f\n", m, v["auc_mean"].get<double>(),
                v["auc_std"].get<double>());
  }
  std::printf("oer - fixed auc:      %+.6f\n",
              s["oer_minus_fixed_auc"].get<double>());
  std::printf("1-auc reduction:      %.2f%%\n",
              100.0 * s["one_minus_auc_reduction"].get<double>());
  std::printf("folds with oer >= fixed: %d/%d\n", s["sign_wins"].get<int>(),
              s["folds"].get<int>());
  for (const auto& w : s["warnings"])
    std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
}

int run_roc(const RocArgs& a) {
  DatasetH data;
  if (int rc = read_dataset(a.input, a.schema, data)) return rc;

  if (a.bin_sweep.empty()) {
    json cfg = experiment_json(a, a.partition.bins, a.out_dir);
    ApiString summary;
    CHECK(oer_run_roc_experiment(data, cfg.dump().c_str(), summary.out()));
    json s = json::parse(summary.str());
    print_summary(s);
    if (!a.out_dir.empty())
      std::fprintf(stderr, "curve files written under %s\n",
                   a.out_dir.c_str());
    return 0;
  }

  // Bin-count comparison: one full experiment per requested count, same
  // folds and seed, so the numbers differ only in the partition.
  std::string csv = "bins,oer_auc_mean,oer_auc_std,fixed_auc_mean,"
                    "fixed_auc_std,oer_minus_fixed_auc,"
                    "one_minus_auc_reduction,sign_wins\n";
  std::printf("%-6s %12s %12s %12s %10s\n", "bins", "oer_auc", "fixed_auc",
              "delta", "wins");
  for (int b : a.bin_sweep) {
    std::vector<int> bins(a.partition.features.size(), b);
    std::string sub_dir =
        a.out_dir.empty() ? "" : a.out_dir + "/bins_" + std::to_string(b);
    json cfg = experiment_json(a, bins, sub_dir);
    ApiString summary;
    CHECK(oer_run_roc_experiment(data, cfg.dump().c_str(), summary.out()));
    json s = json::parse(summary.str());
    double oer_mean = s["methods"]["oer"]["auc_mean"].get<double>();
    double fixed_mean = s["methods"]["fixed"]["auc_mean"].get<double>();
    std::printf("%-6d %12.6f %12.6f %+12.6f %6d/%d\n", b, oer_mean, fixed_mean,
                s["oer_minus_fixed_auc"].get<double>(),
                s["sign_wins"].get<int>(), s["folds"].get<int>());
    char row[256];
    std::snprintf(row, sizeof(row), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  b, oer_mean, s["methods"]["oer"]["auc_std"].get<double>(),
                  fixed_mean, s["methods"]["fixed"]["auc_std"].get<double>(),
                  s["oer_minus_fixed_auc"].get<double>(),
                  s["one_minus_auc_reduction"].get<double>(),
                  s["sign_wins"].get<int>());
    csv += row;
  }
  if (!a.out_dir.empty()) {
    std::string path = a.out_dir + "/sweep_summary.csv";
    if (int rc = write_text_file(path, csv)) return rc;
    std::fprintf(stderr, "bin sweep summary written to %s\n", path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-bin decision thresholds for binary classifier scores"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oer_version());

  SynthArgs synth;
  CLI::App* cmd_synth =
      app.add_subcommand("synth", "Generate a benchmark dataset");
  cmd_synth
      ->add_option("example", synth.example,
                   "Which generator: example1 or example2")
      ->required();
  cmd_synth->add_option("--n", synth.n, "Sample count (default: 20000)");
  cmd_synth->add_option("--seed", synth.seed, "RNG seed (default: 1)");
  cmd_synth->add_option("--out", synth.out, "Output file")->required();

  FitArgs fit;
  std::string fit_config;
  ConfigBinder fit_binder;
  CLI::App* cmd_fit =
      app.add_subcommand("fit", "Fit a per-bin score model and save it");
  fit_binder.bind(cmd_fit->add_option("--input", fit.input, "Dataset file"),
                  "input", fit.input);
  fit_binder.bind(cmd_fit->add_option("--out", fit.out, "Model output file"),
                  "out", fit.out);
  fit.schema.add_options(cmd_fit, fit_binder);
  fit.partition.add_options(cmd_fit, fit_binder);
  fit.fit.add_options(cmd_fit, fit_binder);
  cmd_fit->add_option("--config", fit_config, "JSON config file; flags win");

  SelectArgs sel;
  std::string sel_config;
  ConfigBinder sel_binder;
  CLI::App* cmd_select = app.add_subcommand(
      "select", "Rank auxiliary features by threshold-usefulness");
  sel_binder.bind(cmd_select->add_option("--input", sel.input, "Dataset file"),
                  "input", sel.input);
  sel_binder.bind(cmd_select->add_option("--out", sel.out, "Report CSV file"),
                  "out", sel.out);
  sel.schema.add_options(cmd_select, sel_binder);
  sel_binder.bind(cmd_select->add_option(
                      "--bins", sel.nbins,
                      "Interior bins per candidate feature (default: 8)"),
                  "bins", sel.nbins);
  sel_binder.bind(cmd_select->add_option("--sd-min", sel.sd_min,
                                         "Separation-variance acceptance "
                                         "threshold (default: 0.05)"),
                  "sd_min", sel.sd_min);
  sel_binder.bind(cmd_select->add_option("--prior-min", sel.prior_min,
                                         "Balance-variance acceptance "
                                         "threshold (default: 0.05)"),
                  "prior_min", sel.prior_min);
  sel_binder.bind(cmd_select->add_flag("--geomean", sel.geomean,
                                       "Use the geometric-mean separation "
                                       "denominator"),
                  "geomean", sel.geomean);
  cmd_select->add_option("--config", sel_config,
                         "JSON config file; flags win");

  SweepArgs sweep;
  std::string sweep_config;
  ConfigBinder sweep_binder;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "Solve threshold vectors over a trade-off grid");
  sweep_binder.bind(cmd_sweep->add_option("--model", sweep.model_path,
                                          "Model file from `fit`"),
                    "model", sweep.model_path);
  sweep_binder.bind(
      cmd_sweep->add_option("--input", sweep.input,
                            "Dataset used to size the automatic grid"),
      "input", sweep.input);
  sweep_binder.bind(cmd_sweep->add_option("--out", sweep.out,
                                          "Threshold CSV file (default: "
                                          "print to stdout)"),
                    "out", sweep.out);
  sweep.schema.add_options(cmd_sweep, sweep_binder);
  sweep.solver.add_options(cmd_sweep, sweep_binder);
  sweep_binder.bind(cmd_sweep
                        ->add_option("--lambdas", sweep.lambdas,
                                     "Explicit ascending trade-off levels")
                        ->delimiter(','),
                    "lambdas", sweep.lambdas);
  sweep_binder.bind(cmd_sweep->add_option("--lambda-min", sweep.lambda_min,
                                          "Log-spaced grid lower end"),
                    "lambda_min", sweep.lambda_min);
  sweep_binder.bind(cmd_sweep->add_option("--lambda-max", sweep.lambda_max,
                                          "Log-spaced grid upper end"),
                    "lambda_max", sweep.lambda_max);
  sweep_binder.bind(cmd_sweep->add_option("--grid-size", sweep.grid_size,
                                          "Grid point count (default: 200)"),
                    "grid_size", sweep.grid_size);
  cmd_sweep->add_option("--config", sweep_config,
                        "JSON config file; flags win");

  RocArgs roc;
  std::string roc_config;
  ConfigBinder roc_binder;
  CLI::App* cmd_roc = app.add_subcommand(
      "roc", "Cross-validated ROC comparison against the fixed threshold");
  roc_binder.bind(cmd_roc->add_option("--input", roc.input, "Dataset file"),
                  "input", roc.input);
  roc_binder.bind(cmd_roc->add_option("--out-dir", roc.out_dir,
                                      "Directory for curve files and the "
                                      "summary (created if absent)"),
                  "out_dir", roc.out_dir);
  roc.schema.add_options(cmd_roc, roc_binder);
  roc.partition.add_options(cmd_roc, roc_binder);
  roc.fit.add_options(cmd_roc, roc_binder);
  roc.solver.add_options(cmd_roc, roc_binder);
  roc_binder.bind(cmd_roc->add_option("--lambda-grid-size",
                                      roc.lambda_grid_size,
                                      "Trade-off grid size (default: 200)"),
                  "lambda_grid_size", roc.lambda_grid_size);
  roc_binder.bind(cmd_roc->add_option("--baseline-offsets",
                                      roc.baseline_offsets,
                                      "Offset grid size for the dynamic "
                                      "baselines (default: 512)"),
                  "baseline_offsets", roc.baseline_offsets);
  roc_binder.bind(cmd_roc->add_option("--folds", roc.folds,
                                      "Cross-validation folds (default: 10)"),
                  "folds", roc.folds);
  roc_binder.bind(cmd_roc->add_option("--seed", roc.seed,
                                      "Seed for folds and solver grid "
                                      "(default: 1)"),
                  "seed", roc.seed);
  roc_binder.bind(cmd_roc->add_flag("--fold-curves,!--no-fold-curves",
                                    roc.fold_curves,
                                    "Write per-fold curve files (default: on)"),
                  "write_fold_curves", roc.fold_curves);
  roc_binder.bind(cmd_roc
                      ->add_option("--bin-sweep", roc.bin_sweep,
                                   "Compare several interior bin counts; "
                                   "writes sweep_summary.csv")
                      ->delimiter(','),
                  "bin_sweep", roc.bin_sweep);
  cmd_roc->add_option("--config", roc_config, "JSON config file; flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (cmd_synth->parsed()) return run_synth(synth);
  if (cmd_fit->parsed()) {
    if (int rc = load_config(fit_config, fit_binder)) return rc;
    return run_fit(fit);
  }
  if (cmd_select->parsed()) {
    if (int rc = load_config(sel_config, sel_binder)) return rc;
    return run_select(sel);
  }
  if (cmd_sweep->parsed()) {
    if (int rc = load_config(sweep_config, sweep_binder)) return rc;
    return run_sweep(sweep);
  }
  if (cmd_roc->parsed()) {
    if (int rc = load_config(roc_config, roc_binder)) return rc;
    return run_roc(roc);
  }
  return 0;
}
