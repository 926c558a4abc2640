#include "experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "io_util.hpp"
#include "roc.hpp"

namespace oer {

namespace {

void summarize(MethodSummary& m) {
  std::size_t n = m.fold_aucs.size();
  double sum = 0.0;
  for (double v : m.fold_aucs) sum += v;
  m.auc_mean = n ? sum / static_cast<double>(n) : 0.0;
  double ss = 0.0;
  for (double v : m.fold_aucs) ss += (v - m.auc_mean) * (v - m.auc_mean);
  m.auc_std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

void write_thresholds_csv(const std::string& path, const BinModel& model,
                          const std::vector<ThresholdCurve>& curves) {
  std::ostringstream os;
  os << "lambda,bin,threshold,converged,predicted_fpr,predicted_tpr\n";
  char buf[64];
  for (const auto& c : curves) {
    PredictedPoint pred = predicted_operating_point(model, c);
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", c.lambda);
      os << buf << ',' << i << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", c.thresholds[i]);
      os << buf << ',' << (c.bin_converged[i] ? 1 : 0) << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", pred.fpr);
      os << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", pred.tpr);
      os << buf << '\n';
    }
  }
  atomic_write_text(path, os.str());
}

}  // namespace

BinPartition build_partition(const ScoredDataset& data,
                             const PartitionSettings& s,
                             std::vector<std::string>* warnings) {
  switch (s.strategy) {
    case PartitionStrategy::equal_width:
      return make_equal_width_partition(data, s.features, s.bins);
    case PartitionStrategy::quantile:
      return make_quantile_partition(data, s.features, s.bins, warnings);
    case PartitionStrategy::uniform_range:
      return make_uniform_partition(data.aux_dim(), s.features, s.bins,
                                    s.range_lows, s.range_highs);
  }
  throw Error(ErrorCode::argument, "unknown partition strategy");
}

ExperimentResult run_roc_experiment(const ScoredDataset& data,
                                    const ExperimentConfig& config) {
  if (config.folds < 2)
    throw Error(ErrorCode::argument,
                "experiment needs folds >= 2: every method is evaluated on "
                "held-out data");
  if (config.lambda_grid_size < 1)
    throw Error(ErrorCode::argument, "lambda_grid_size must be >= 1");

  ExperimentResult result;
  result.folds = config.folds;
  result.seed = config.seed;

  std::vector<FoldPair> folds =
      split_dataset(data, config.folds, config.seed);

  namespace fs = std::filesystem;
  bool write_files = !config.output_dir.empty();
  auto out_path = [&](const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
  };

  for (int f = 0; f < config.folds; ++f) {
    const ScoredDataset& train = folds[static_cast<std::size_t>(f)].train;
    const ScoredDataset& test = folds[static_cast<std::size_t>(f)].test;

    BinPartition part =
        build_partition(train, config.partition, &result.warnings);
    BinModel model = fit_bin_model(train, part, config.fit);

    std::vector<double> lambdas =
        auto_lambda_grid(model, train, config.lambda_grid_size);
    std::vector<ThresholdCurve> curves =
        sweep_lambda(model, lambdas, config.solver);

    RocCurve oer_raw = oer_empirical_curve(test, part, curves);
    RocCurve oer_env = upper_envelope(oer_raw);
    RocCurve fixed = fixed_threshold_curve(test);
    RocCurve cfpr = offset_baseline_curve(test, model,
                                          BaselineMode::constant_fpr,
                                          config.baseline_offsets);
    RocCurve ctpr = offset_baseline_curve(test, model,
                                          BaselineMode::constant_tpr,
                                          config.baseline_offsets);
    RocCurve hull = rocch({cfpr, ctpr});

    result.oer.fold_aucs.push_back(auc(oer_env));
    result.fixed.fold_aucs.push_back(auc(fixed));
    result.constant_fpr.fold_aucs.push_back(auc(cfpr));
    result.constant_tpr.fold_aucs.push_back(auc(ctpr));
    result.rocch_baselines.fold_aucs.push_back(auc(hull));

    if (write_files && config.write_fold_curves) {
      std::string tag = "fold" + std::to_string(f);
      struct Item {
        const char* name;
        const RocCurve* curve;
      } items[] = {{"oer_raw", &oer_raw},         {"oer_envelope", &oer_env},
                   {"fixed", &fixed},             {"constant_fpr", &cfpr},
                   {"constant_tpr", &ctpr},       {"rocch", &hull}};
      for (const auto& it : items) {
        std::string p = out_path(tag + "_" + it.name + ".csv");
        write_curve_csv(p, *it.curve);
        result.output_files.push_back(p);
      }
      std::string tp = out_path(tag + "_thresholds.csv");
      write_thresholds_csv(tp, model, curves);
      result.output_files.push_back(tp);
    }
  }

  summarize(result.oer);
  summarize(result.fixed);
  summarize(result.constant_fpr);
  summarize(result.constant_tpr);
  summarize(result.rocch_baselines);

  result.oer_minus_fixed_auc = result.oer.auc_mean - result.fixed.auc_mean;
  double headroom = 1.0 - result.fixed.auc_mean;
  result.one_minus_auc_reduction =
      headroom > 1e-12 ? result.oer_minus_fixed_auc / headroom : 0.0;
  result.sign_wins = 0;
  for (int f = 0; f < config.folds; ++f)
    if (result.oer.fold_aucs[static_cast<std::size_t>(f)] >=
        result.fixed.fold_aucs[static_cast<std::size_t>(f)])
      ++result.sign_wins;

  if (write_files) {
    // record the summary paths first so the serialized output list is complete
    std::string sj = out_path("summary.json");
    std::string sc = out_path("summary.csv");
    result.output_files.push_back(sj);
    result.output_files.push_back(sc);
    atomic_write_text(sj, experiment_summary_json(result) + "\n");

    std::ostringstream os;
    os << "method,auc_mean,auc_std\n";
    char buf[64];
    auto row = [&](const char* name, const MethodSummary& m) {
      os << name << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m.auc_mean);
      os << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m.auc_std);
      os << buf << '\n';
    };
    row("oer", result.oer);
    row("fixed", result.fixed);
    row("constant_fpr", result.constant_fpr);
    row("constant_tpr", result.constant_tpr);
    row("rocch_baselines", result.rocch_baselines);
    atomic_write_text(sc, os.str());
  }
  return result;
}

std::string experiment_summary_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  auto method = [](const MethodSummary& m) {
    return nlohmann::json{{"auc_mean", m.auc_mean},
                          {"auc_std", m.auc_std},
                          {"fold_aucs", m.fold_aucs}};
  };
  j["methods"]["oer"] = method(r.oer);
  j["methods"]["fixed"] = method(r.fixed);
  j["methods"]["constant_fpr"] = method(r.constant_fpr);
  j["methods"]["constant_tpr"] = method(r.constant_tpr);
  j["methods"]["rocch_baselines"] = method(r.rocch_baselines);
  j["oer_minus_fixed_auc"] = r.oer_minus_fixed_auc;
  j["one_minus_auc_reduction"] = r.one_minus_auc_reduction;
  j["sign_wins"] = r.sign_wins;
  j["warnings"] = r.warnings;
  j["outputs"] = r.output_files;
  return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::parse,
                std::string("experiment config json: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    if (j.contains("partition")) {
      const auto& p = j["partition"];
      std::string strat = p.value("strategy", "equal_width");
      if (strat == "equal_width")
        cfg.partition.strategy = PartitionStrategy::equal_width;
      else if (strat == "quantile")
        cfg.partition.strategy = PartitionStrategy::quantile;
      else if (strat == "uniform")
        cfg.partition.strategy = PartitionStrategy::uniform_range;
      else
        throw Error(ErrorCode::schema,
                    "unknown partition strategy '" + strat + "'");
      if (p.contains("features"))
        cfg.partition.features = p["features"].get<std::vector<std::size_t>>();
      if (p.contains("bins"))
        cfg.partition.bins = p["bins"].get<std::vector<int>>();
      if (p.contains("ranges")) {
        for (const auto& r : p["ranges"]) {
          cfg.partition.range_lows.push_back(r.at(0).get<double>());
          cfg.partition.range_highs.push_back(r.at(1).get<double>());
        }
      }
    }
    if (j.contains("fit")) {
      const auto& p = j["fit"];
      cfg.fit.min_count = p.value("min_count", cfg.fit.min_count);
      cfg.fit.sigma_floor = p.value("sigma_floor", cfg.fit.sigma_floor);
      cfg.fit.equal_variance =
          p.value("equal_variance", cfg.fit.equal_variance);
    }
    if (j.contains("solver")) {
      const auto& p = j["solver"];
      cfg.solver.learning_rate =
          p.value("learning_rate", cfg.solver.learning_rate);
      cfg.solver.stop_threshold =
          p.value("stop_threshold", cfg.solver.stop_threshold);
      cfg.solver.max_iterations = p.value<long>("max_iterations",
                                                cfg.solver.max_iterations);
      cfg.solver.clamp = p.value("clamp", cfg.solver.clamp);
      std::string init = p.value("init", "closed_form");
      if (init == "zero")
        cfg.solver.init = InitMode::zero;
      else if (init == "closed_form")
        cfg.solver.init = InitMode::closed_form;
      else if (init == "grid")
        cfg.solver.init = InitMode::grid;
      else
        throw Error(ErrorCode::schema, "unknown init mode '" + init + "'");
    }
    cfg.lambda_grid_size = j.value("lambda_grid_size", cfg.lambda_grid_size);
    cfg.baseline_offsets = j.value("baseline_offsets", cfg.baseline_offsets);
    cfg.folds = j.value("folds", cfg.folds);
    cfg.seed = j.value<std::uint64_t>("seed", cfg.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.write_fold_curves =
        j.value("write_fold_curves", cfg.write_fold_curves);
    return cfg;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::schema,
                std::string("experiment config json: ") + e.what());
  }
}

}  // namespace oer
