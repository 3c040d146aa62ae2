#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "epicast/errors.hpp"
#include "epicast/experiment.hpp"
#include "epicast/synth.hpp"
#include "epicast/transfer.hpp"

using namespace epicast;

namespace {

namespace fs = std::filesystem;

// A compressed timeline on 120-day synthetic series: short slices, small
// models, so a full study runs in well under a second.
ExperimentConfig tiny_config(const std::string& dir, int n_sources) {
  fs::create_directories(dir);
  const Date start = Date::parse("2020-02-15");

  ExperimentConfig cfg;
  for (int i = 0; i < n_sources; ++i) {
    SynthParams params;
    params.amplitude = 8000.0 + 2000.0 * i;
    params.center_fraction = 0.40 + 0.05 * i;
    params.population_density = 50.0 + 25.0 * i;
    const std::string name = "Src" + std::to_string(i);
    const CountrySeries s = generate_synthetic(SynthKind::logistic_wave, 120, 0, params, name);
    const std::string path = dir + "/" + name + ".csv";
    write_series_csv(s, path);
    cfg.countries.push_back({name, path, params.population_density});
  }
  SynthParams target_params;
  target_params.amplitude = 7000.0;
  target_params.center_fraction = 0.55;
  target_params.population_density = 120.0;
  const CountrySeries target =
      generate_synthetic(SynthKind::logistic_wave, 120, 0, target_params, "Tgt");
  const std::string target_path = dir + "/Tgt.csv";
  write_series_csv(target, target_path);
  cfg.countries.push_back({"Tgt", target_path, target_params.population_density});
  cfg.target = "Tgt";

  cfg.dates.pretrain = {start, start + 69};
  cfg.dates.finetune = {start + 40, start + 79};
  cfg.dates.validate = {start + 80, start + 85};
  cfg.dates.test = {start + 86, start + 91};
  cfg.lookback = 5;
  cfg.horizon = 3;
  cfg.train.epochs = 4;
  cfg.train.batch_size = 16;
  cfg.train.hidden_size = 5;
  cfg.train.learning_rate = 1e-2;
  cfg.train.seed = 0;
  cfg.seeds = {0, 1};
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("rolling origins advance by the horizon and drop the partial tail") {
  const std::vector<Date> validation =
      rolling_origins({Date::parse("2021-04-01"), Date::parse("2021-04-15")}, 7);
  REQUIRE(validation.size() == 2);  // 14 of the 15 days are covered
  CHECK(validation[0] == Date::parse("2021-04-01"));
  CHECK(validation[1] == Date::parse("2021-04-08"));

  const std::vector<Date> test =
      rolling_origins({Date::parse("2021-04-16"), Date::parse("2021-06-04")}, 7);
  CHECK(test.size() == 7);  // 49 of the 50 test days
  CHECK(test.front() == Date::parse("2021-04-16"));
  CHECK(test.back() == Date::parse("2021-05-28"));

  CHECK(rolling_origins({Date::parse("2021-04-16"), Date::parse("2021-04-16")}, 1).size() == 1);
  CHECK_THROWS_WITH_AS(rolling_origins({Date::parse("2021-04-16"), Date::parse("2021-04-17")}, 7),
                       doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("four sources produce the 15 combinations plus the target-only row") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_four", 4);
  const ExperimentOutput out = run_full_experiment(cfg);

  REQUIRE(out.table.rows.size() == 16);
  CHECK(out.combinations.size() == 15);
  CHECK(out.table.rows[0].label == "Src0");
  CHECK(out.table.rows[4].label == "Src0+Src1");
  CHECK(out.table.rows[14].label == "Src0+Src1+Src2+Src3");
  CHECK(out.table.rows[15].label == "Tgt-only");
  CHECK(out.table.rows[15].n_members == 1);
  CHECK(out.table.regime == "fine-tuned");

  for (const ResultRow& row : out.table.rows) {
    CHECK(std::isfinite(row.rmse.sum()));
    CHECK(std::isfinite(row.rmae.sum()));
    CHECK(row.rmse.minCoeff() >= 0.0);
  }
  // members carry their validation scores and per-origin forecasts
  REQUIRE(out.sources.size() == 4);
  for (const MemberRun& m : out.sources) {
    CHECK(m.score.rmse.minCoeff() > 0.0);
    CHECK(m.validation_forecasts.size() == out.validation_origins.size());
    CHECK(m.test_forecasts.size() == out.test_origins.size());
  }
}

TEST_CASE("one source produces a two-row table") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_one", 1);
  const ExperimentOutput out = run_full_experiment(cfg);
  REQUIRE(out.table.rows.size() == 2);
  CHECK(out.table.rows[0].label == "Src0");
  CHECK(out.table.rows[1].label == "Tgt-only");
}

TEST_CASE("the two regimes differ only in error values") {
  ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_regime", 2);
  cfg.finetune_enabled = true;
  const ExperimentOutput tuned = run_full_experiment(cfg);
  cfg.finetune_enabled = false;
  const ExperimentOutput frozen = run_full_experiment(cfg);

  CHECK(tuned.table.regime == "fine-tuned");
  CHECK(frozen.table.regime == "not-fine-tuned");
  CHECK(tuned.test_origins == frozen.test_origins);
  CHECK(tuned.validation_origins == frozen.validation_origins);
  REQUIRE(tuned.table.rows.size() == frozen.table.rows.size());
  for (std::size_t r = 0; r < tuned.table.rows.size(); ++r) {
    CHECK(tuned.table.rows[r].label == frozen.table.rows[r].label);
    CHECK(tuned.table.rows[r].n_members == frozen.table.rows[r].n_members);
  }

  // without fine-tuning the member models are the raw pre-trained ones
  CHECK(frozen.sources[0].model.provenance == "Src0");
  CHECK(tuned.sources[0].model.provenance == "Src0→fine-tuned:Tgt");

  // ...bit-identical to running the pre-training alone
  const CountrySeries src0 = load_series(cfg.countries[0].csv_path, cfg.countries[0].name,
                                         cfg.countries[0].population_density);
  TrainConfig member_cfg = cfg.train;
  member_cfg.seed = cfg.train.seed;  // first member
  const GruModel fresh = pretrain(src0, cfg.dates.pretrain, cfg.lookback, member_cfg);
  CHECK(flatten(frozen.sources[0].model.params) == flatten(fresh.params));
}

TEST_CASE("experiment outputs are byte-identical across runs") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_det", 2);
  const std::string out_a = "/tmp/epicast_exp_det/out_a";
  const std::string out_b = "/tmp/epicast_exp_det/out_b";
  write_experiment_outputs(run_full_experiment(cfg), cfg, out_a);
  write_experiment_outputs(run_full_experiment(cfg), cfg, out_b);
  CHECK(slurp(out_a + "/results_table.csv") == slurp(out_b + "/results_table.csv"));
  CHECK(slurp(out_a + "/ensemble_report.json") == slurp(out_b + "/ensemble_report.json"));
}

TEST_CASE("table rows can be recomputed from the stored forecast CSVs") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_selfcheck", 2);
  const std::string out_dir = "/tmp/epicast_exp_selfcheck/out";
  const ExperimentOutput output = run_full_experiment(cfg);
  write_experiment_outputs(output, cfg, out_dir);

  const CountrySeries target =
      load_series(cfg.target_entry().csv_path, cfg.target, cfg.target_entry().population_density);

  const ResultTable table = read_result_table_csv(out_dir + "/results_table.csv");
  REQUIRE(table.rows.size() == 4);  // 3 combinations + target-only
  REQUIRE(table.test_origins == output.test_origins);

  for (const ResultRow& row : table.rows) {
    std::vector<double> original[kNumFeatures], predicted[kNumFeatures];
    for (Date origin : table.test_origins) {
      const ForecastResult fc = read_forecast_csv(out_dir + "/forecast_" + row.label + "_" +
                                                  origin.to_string() + ".csv");
      const CountrySeries truth =
          split_by_dates(target, fc.start_date, fc.start_date + (fc.horizon - 1));
      const FeatureMatrix actual = truth.to_matrix();
      for (int f = 0; f < kNumFeatures; ++f) {
        for (int d = 0; d < fc.horizon; ++d) {
          original[f].push_back(actual(d, f));
          predicted[f].push_back(fc.values(d, f));
        }
      }
    }
    for (int f = 0; f < kNumFeatures; ++f) {
      const Eigen::Map<const Eigen::VectorXd> o(original[f].data(),
                                                static_cast<Eigen::Index>(original[f].size()));
      const Eigen::Map<const Eigen::VectorXd> p(predicted[f].data(),
                                                static_cast<Eigen::Index>(predicted[f].size()));
      CHECK(std::abs(row.rmse[f] - rmse_relative(o, p)) <= 1e-9);
      CHECK(std::abs(row.rmae[f] - rmae_relative(o, p)) <= 1e-9);
    }
  }
}

TEST_CASE("a broken member is reported by name, not silently dropped") {
  ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_partial", 2);
  cfg.countries[1].csv_path = "/tmp/epicast_exp_partial/missing.csv";
  try {
    run_full_experiment(cfg);
    FAIL("expected PartialFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PartialFailure);
    CHECK(std::string(e.what()).find("Src1") != std::string::npos);
  }
}

TEST_CASE("population statistics match the hand computation") {
  const auto [mean, stddev] = mean_and_population_std({0.02, 0.04});
  CHECK(mean == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(stddev == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(mean_and_population_std({}), Error);
}

TEST_CASE("stability over a repeated seed collapses to zero deviation") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_stab", 1);
  const std::vector<StabilityRow> rows = multi_seed_stability(cfg, {5, 5});
  REQUIRE(rows.size() == 2);
  for (const StabilityRow& row : rows) {
    CHECK(row.std_rmse.maxCoeff() == 0.0);
    CHECK(row.mean_rmse.minCoeff() > 0.0);
  }
  CHECK_THROWS_AS(multi_seed_stability(cfg, {1}), Error);
}

TEST_CASE("stability over distinct seeds reports spread per combination") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_stab2", 1);
  const std::vector<StabilityRow> rows = multi_seed_stability(cfg, {0, 1});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "Src0");
  CHECK(rows[0].std_rmse.minCoeff() >= 0.0);
}

TEST_CASE("grid search is exhaustive with a lexicographic tie-break") {
  const ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_grid", 1);

  const GridSearchResult single = grid_search(cfg, {1e-2}, {3}, {5});
  REQUIRE(single.table.size() == 1);
  CHECK(single.best_index == 0);
  CHECK(single.best_config.train.learning_rate == 1e-2);
  CHECK(single.best_config.train.epochs == 3);
  CHECK(single.best_config.train.hidden_size == 5);

  const GridSearchResult four = grid_search(cfg, {1e-2, 5e-3}, {2, 3}, {5});
  CHECK(four.table.size() == 4);

  // duplicated grid points tie exactly; the earlier one wins
  const GridSearchResult tie = grid_search(cfg, {1e-2, 1e-2}, {2}, {5});
  REQUIRE(tie.table.size() == 2);
  CHECK(tie.table[0].objective == tie.table[1].objective);
  CHECK(tie.best_index == 0);

  CHECK_THROWS_AS(grid_search(cfg, {}, {2}, {5}), Error);
}

TEST_CASE("a single-point sweep agrees with the full experiment") {
  ExperimentConfig cfg = tiny_config("/tmp/epicast_exp_sweep", 1);
  const LookbackSweepResult sweep = lookback_sweep(cfg, {5}, {cfg.train.seed});
  REQUIRE(sweep.mean_rmse.size() == 1);

  const ExperimentOutput out = run_full_experiment(cfg);
  Eigen::Array3d best = out.combinations.front().rmse;
  for (const CombinationResult& combo : out.combinations) best = best.min(combo.rmse);
  for (int f = 0; f < kNumFeatures; ++f) {
    CHECK(sweep.mean_rmse[0][f] == doctest::Approx(best[f]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(lookback_sweep(cfg, {0}, {0}), Error);
  CHECK_THROWS_AS(lookback_sweep(cfg, {}, {0}), Error);
}
