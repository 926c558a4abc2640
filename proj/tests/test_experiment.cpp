#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "experiment.hpp"
#include "synth.hpp"
#include "test_util.hpp"

using namespace oer;
using oer_test::expect_error;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.partition.features = {0};
  cfg.partition.bins = {6};
  cfg.fit.equal_variance = true;
  cfg.lambda_grid_size = 80;
  cfg.baseline_offsets = 128;
  cfg.folds = 3;
  cfg.seed = 11;
  return cfg;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("experiment rejects degenerate configurations") {
  ScoredDataset d = gen_example1(300, 1);
  ExperimentConfig cfg = small_config();
  cfg.folds = 1;
  expect_error([&] { run_roc_experiment(d, cfg); }, ErrorCode::argument);
  cfg = small_config();
  cfg.lambda_grid_size = 0;
  expect_error([&] { run_roc_experiment(d, cfg); }, ErrorCode::argument);
}

TEST_CASE("cross-validated run produces coherent summaries") {
  ScoredDataset d = gen_example1(3000, 42);
  ExperimentConfig cfg = small_config();
  ExperimentResult r = run_roc_experiment(d, cfg);

  CHECK(r.folds == 3);
  CHECK(r.seed == 11);
  const MethodSummary* methods[] = {&r.oer, &r.fixed, &r.constant_fpr,
                                    &r.constant_tpr, &r.rocch_baselines};
  for (const MethodSummary* m : methods) {
    REQUIRE(m->fold_aucs.size() == 3);
    double sum = 0.0;
    for (double a : m->fold_aucs) {
      CHECK(a > 0.0);
      CHECK(a <= 1.0);
      sum += a;
    }
    CHECK(m->auc_mean == doctest::Approx(sum / 3.0).epsilon(1e-12));
    CHECK(m->auc_std >= 0.0);
  }
  CHECK(r.oer_minus_fixed_auc ==
        doctest::Approx(r.oer.auc_mean - r.fixed.auc_mean).epsilon(1e-12));
  double headroom = 1.0 - r.fixed.auc_mean;
  CHECK(r.one_minus_auc_reduction ==
        doctest::Approx(r.oer_minus_fixed_auc / headroom).epsilon(1e-9));
  int wins = 0;
  for (int f = 0; f < 3; ++f)
    if (r.oer.fold_aucs[f] >= r.fixed.fold_aucs[f]) ++wins;
  CHECK(r.sign_wins == wins);
  CHECK(r.sign_wins >= 0);
  CHECK(r.sign_wins <= 3);
  // this world rewards per-bin thresholds; the sweep should come out ahead
  CHECK(r.oer_minus_fixed_auc > 0.0);
  CHECK(r.warnings.empty());
  CHECK(r.output_files.empty());
}

TEST_CASE("experiment runs are reproducible") {
  ScoredDataset d = gen_example1(1200, 8);
  ExperimentConfig cfg = small_config();
  cfg.lambda_grid_size = 40;
  ExperimentResult a = run_roc_experiment(d, cfg);
  ExperimentResult b = run_roc_experiment(d, cfg);
  CHECK(experiment_summary_json(a) == experiment_summary_json(b));
  cfg.seed = 12;
  ExperimentResult c = run_roc_experiment(d, cfg);
  CHECK(experiment_summary_json(a) != experiment_summary_json(c));
}

TEST_CASE("experiment writes its artifacts when given a directory") {
  namespace fs = std::filesystem;
  fs::path dir = oer_test::fresh_dir("experiment_out");
  ScoredDataset d = gen_example1(1200, 3);
  ExperimentConfig cfg = small_config();
  cfg.partition.bins = {4};
  cfg.lambda_grid_size = 40;
  cfg.baseline_offsets = 64;
  cfg.folds = 2;
  cfg.output_dir = dir.string();
  ExperimentResult r = run_roc_experiment(d, cfg);

  // 7 files per fold plus the two summaries
  CHECK(r.output_files.size() == 16);
  for (const std::string& f : r.output_files) CHECK(fs::exists(f));
  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
    names.insert(entry.path().filename().string());
  }
  for (const char* base :
       {"oer_raw", "oer_envelope", "fixed", "constant_fpr", "constant_tpr",
        "rocch", "thresholds"}) {
    CHECK(names.count("fold0_" + std::string(base) + ".csv") == 1);
    CHECK(names.count("fold1_" + std::string(base) + ".csv") == 1);
  }
  CHECK(names.count("summary.json") == 1);
  CHECK(names.count("summary.csv") == 1);

  CHECK(first_line(dir / "fold0_thresholds.csv") ==
        "lambda,bin,threshold,converged,predicted_fpr,predicted_tpr");
  CHECK(first_line(dir / "fold0_fixed.csv") == "fpr,tpr,threshold");
  CHECK(first_line(dir / "fold0_constant_fpr.csv") == "fpr,tpr,offset");
  CHECK(first_line(dir / "fold0_oer_raw.csv") == "fpr,tpr,lambda");
  CHECK(first_line(dir / "summary.csv") == "method,auc_mean,auc_std");

  // the stored summary agrees with the in-memory result
  std::ifstream in(dir / "summary.json");
  nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["folds"] == 2);
  CHECK(j["methods"]["oer"]["fold_aucs"].size() == 2);
  CHECK(j["methods"]["fixed"]["auc_mean"].get<double>() ==
        doctest::Approx(r.fixed.auc_mean));
  CHECK(j["sign_wins"] == r.sign_wins);
  CHECK(j["outputs"].size() == r.output_files.size());
  fs::remove_all(dir);
}

TEST_CASE("fold curve files can be switched off") {
  namespace fs = std::filesystem;
  fs::path dir = oer_test::fresh_dir("experiment_noout");
  ScoredDataset d = gen_example1(900, 4);
  ExperimentConfig cfg = small_config();
  cfg.partition.bins = {4};
  cfg.lambda_grid_size = 30;
  cfg.baseline_offsets = 64;
  cfg.folds = 2;
  cfg.output_dir = dir.string();
  cfg.write_fold_curves = false;
  ExperimentResult r = run_roc_experiment(d, cfg);
  CHECK(r.output_files.size() == 2);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "summary.csv"));
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    CHECK(name.rfind("fold", 0) != 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("quantile warnings from every fold are collected") {
  // a feature dominated by one value defeats the requested quantile count
  ScoredDataset d;
  d.aux_names = {"u"};
  for (int i = 0; i < 400; ++i) {
    LabeledSample s;
    s.label = (i % 2) ? 1 : -1;
    s.score = (i % 2) ? 1.0 + 0.001 * i : 0.001 * i;
    s.aux = {i < 380 ? 1.0 : static_cast<double>(i % 7)};
    d.samples.push_back(std::move(s));
  }
  ExperimentConfig cfg = small_config();
  cfg.partition.strategy = PartitionStrategy::quantile;
  cfg.partition.bins = {8};
  cfg.lambda_grid_size = 20;
  cfg.baseline_offsets = 32;
  cfg.folds = 3;
  ExperimentResult r = run_roc_experiment(d, cfg);
  CHECK(r.warnings.size() == 3);
  for (const auto& w : r.warnings) {
    CHECK(w.find("u") != std::string::npos);
    CHECK(w.find("8") != std::string::npos);
  }
}

TEST_CASE("partition settings build all three strategies") {
  ScoredDataset d = gen_example1(500, 6);
  PartitionSettings s;
  s.strategy = PartitionStrategy::equal_width;
  s.features = {0};
  s.bins = {4};
  CHECK(build_partition(d, s).bin_count() == 6);

  s.strategy = PartitionStrategy::quantile;
  std::vector<std::string> warnings;
  BinPartition q = build_partition(d, s, &warnings);
  CHECK(q.bin_count() == 6);  // X1 is continuous: all quantiles distinct
  CHECK(warnings.empty());

  s.strategy = PartitionStrategy::uniform_range;
  s.range_lows = {1.0};
  s.range_highs = {5.0};
  CHECK(build_partition(d, s).bin_count() == 6);
}

TEST_CASE("experiment config parses from json") {
  SUBCASE("fully specified document") {
    std::string text = R"({
      "partition": {"strategy": "uniform", "features": [1, 0],
                    "bins": [3, 4], "ranges": [[-6.0, 6.0], [0.0, 1.0]]},
      "fit": {"min_count": 2, "sigma_floor": 0.125, "equal_variance": true},
      "solver": {"learning_rate": 0.2, "stop_threshold": 1e-9,
                 "max_iterations": 5000, "clamp": 12.5, "init": "grid"},
      "lambda_grid_size": 77,
      "baseline_offsets": 99,
      "folds": 4,
      "seed": 123456789,
      "output_dir": "runs/exp1",
      "write_fold_curves": false
    })";
    ExperimentConfig cfg = experiment_config_from_json(text);
    CHECK(cfg.partition.strategy == PartitionStrategy::uniform_range);
    CHECK(cfg.partition.features == std::vector<std::size_t>{1, 0});
    CHECK(cfg.partition.bins == std::vector<int>{3, 4});
    CHECK(cfg.partition.range_lows == std::vector<double>{-6.0, 0.0});
    CHECK(cfg.partition.range_highs == std::vector<double>{6.0, 1.0});
    CHECK(cfg.fit.min_count == 2);
    CHECK(cfg.fit.sigma_floor == 0.125);
    CHECK(cfg.fit.equal_variance);
    CHECK(cfg.solver.learning_rate == 0.2);
    CHECK(cfg.solver.stop_threshold == 1e-9);
    CHECK(cfg.solver.max_iterations == 5000);
    CHECK(cfg.solver.clamp == 12.5);
    CHECK(cfg.solver.init == InitMode::grid);
    CHECK(cfg.lambda_grid_size == 77);
    CHECK(cfg.baseline_offsets == 99);
    CHECK(cfg.folds == 4);
    CHECK(cfg.seed == 123456789);
    CHECK(cfg.output_dir == "runs/exp1");
    CHECK(!cfg.write_fold_curves);
  }
  SUBCASE("empty document keeps the defaults") {
    ExperimentConfig cfg = experiment_config_from_json("{}");
    CHECK(cfg.partition.strategy == PartitionStrategy::equal_width);
    CHECK(cfg.partition.features == std::vector<std::size_t>{0});
    CHECK(cfg.partition.bins == std::vector<int>{8});
    CHECK(cfg.fit.min_count == 5);
    CHECK(!cfg.fit.equal_variance);
    CHECK(cfg.solver.init == InitMode::closed_form);
    CHECK(cfg.lambda_grid_size == 200);
    CHECK(cfg.baseline_offsets == 512);
    CHECK(cfg.folds == 10);
    CHECK(cfg.seed == 1);
    CHECK(cfg.output_dir.empty());
    CHECK(cfg.write_fold_curves);
  }
  SUBCASE("malformed input") {
    expect_error([] { experiment_config_from_json("{nope"); },
                 ErrorCode::parse);
    expect_error(
        [] {
          experiment_config_from_json(
              R"({"partition": {"strategy": "fancy"}})");
        },
        ErrorCode::schema);
    expect_error(
        [] {
          experiment_config_from_json(R"({"solver": {"init": "random"}})");
        },
        ErrorCode::schema);
    expect_error(
        [] { experiment_config_from_json(R"({"folds": "three"})"); },
        ErrorCode::schema);
  }
}

TEST_CASE("summary json carries the documented fields") {
  ExperimentResult r;
  r.folds = 2;
  r.seed = 77;
  r.oer.fold_aucs = {0.9, 0.8};
  r.oer.auc_mean = 0.85;
  r.oer.auc_std = 0.05;
  r.fixed.fold_aucs = {0.7, 0.6};
  r.fixed.auc_mean = 0.65;
  r.oer_minus_fixed_auc = 0.2;
  r.one_minus_auc_reduction = 0.2 / 0.35;
  r.sign_wins = 2;
  r.warnings = {"careful"};
  r.output_files = {"a.csv"};
  nlohmann::json j = nlohmann::json::parse(experiment_summary_json(r));
  CHECK(j["folds"] == 2);
  CHECK(j["seed"] == 77);
  for (const char* m : {"oer", "fixed", "constant_fpr", "constant_tpr",
                        "rocch_baselines"})
    CHECK(j["methods"].contains(m));
  CHECK(j["methods"]["oer"]["auc_mean"].get<double>() ==
        doctest::Approx(0.85));
  CHECK(j["methods"]["oer"]["fold_aucs"] ==
        nlohmann::json::array({0.9, 0.8}));
  CHECK(j["oer_minus_fixed_auc"].get<double>() == doctest::Approx(0.2));
  CHECK(j["sign_wins"] == 2);
  CHECK(j["warnings"] == nlohmann::json::array({"careful"}));
  CHECK(j["outputs"] == nlohmann::json::array({"a.csv"}));
}
