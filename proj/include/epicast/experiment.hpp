#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epicast/config.hpp"
#include "epicast/ensemble.hpp"
#include "epicast/forecast.hpp"
#include "epicast/metrics.hpp"
#include "epicast/series.hpp"
#include "epicast/train.hpp"

namespace epicast {

// Forecast origins covering [range.from, range.to] in non-overlapping
// horizon-day blocks; a final partial block is dropped.
std::vector<Date> rolling_origins(const DateRange& range, int horizon);

struct MemberRun {
  std::string name;  // ensemble member id: country name, or "<target>-only"
  GruModel model;
  ValidationScore score;  // per-variable validation RMSE (sources only)
  std::vector<ForecastResult> validation_forecasts;  // one per validation origin
  std::vector<ForecastResult> test_forecasts;        // one per test origin
};

struct CombinationResult {
  std::string label;  // members joined with '+'
  std::vector<std::string> members;
  EnsembleSpec spec;
  std::vector<ForecastResult> combined;  // one per test origin
  Eigen::Array3d rmse = Eigen::Array3d::Zero();
  Eigen::Array3d rmae = Eigen::Array3d::Zero();
};

struct ResultRow {
  std::string label;
  int n_members = 0;
  Eigen::Array3d rmse = Eigen::Array3d::Zero();
  Eigen::Array3d rmae = Eigen::Array3d::Zero();
};

struct ResultTable {
  std::string regime;  // "fine-tuned" or "not-fine-tuned"
  std::vector<Date> test_origins;
  std::vector<ResultRow> rows;  // 2^k - 1 combinations, then the target-only row
};

struct ExperimentOutput {
  std::vector<Date> validation_origins;
  std::vector<Date> test_origins;
  std::vector<MemberRun> sources;
  MemberRun target_only;
  std::vector<CombinationResult> combinations;
  ResultTable table;
};

// The full study: train every source model (fine-tuned when enabled), score
// them on the validation slice, evaluate every member combination plus the
// target-only model over rolling test origins. Deterministic per seed.
ExperimentOutput run_full_experiment(const ExperimentConfig& config);

// Writes results_table.csv, per-origin forecast CSVs and ensemble_report.json
// under out_dir (created if missing).
void write_experiment_outputs(const ExperimentOutput& output, const ExperimentConfig& config,
                              const std::string& out_dir);

void write_result_table_csv(const ResultTable& table, const std::string& path);
ResultTable read_result_table_csv(const std::string& path);

// ---- look-back sweep -------------------------------------------------------

struct LookbackSweepResult {
  std::vector<int> lookbacks;
  std::vector<std::uint64_t> seeds;
  // best-combination (per-variable minimum) RMSE for each (seed, lookback)
  std::vector<std::vector<Eigen::Array3d>> per_seed_rmse;
  std::vector<Eigen::Array3d> mean_rmse;  // across seeds, one per lookback
};

LookbackSweepResult lookback_sweep(const ExperimentConfig& config,
                                   const std::vector<int>& lookbacks,
                                   const std::vector<std::uint64_t>& seeds);
void write_lookback_sweep_csv(const LookbackSweepResult& sweep, const std::string& path);

// ---- multi-seed stability --------------------------------------------------

struct StabilityRow {
  std::string label;
  Eigen::Array3d mean_rmse = Eigen::Array3d::Zero();
  Eigen::Array3d std_rmse = Eigen::Array3d::Zero();  // population standard deviation
};

std::vector<StabilityRow> multi_seed_stability(const ExperimentConfig& config,
                                               const std::vector<std::uint64_t>& seeds);
void write_stability_csv(const std::vector<StabilityRow>& rows,
                         const std::vector<std::uint64_t>& seeds, const std::string& path);

std::pair<double, double> mean_and_population_std(const std::vector<double>& values);

// ---- grid search -----------------------------------------------------------

struct GridPoint {
  double learning_rate = 0.0;
  int epochs = 0;
  int hidden_size = 0;
  Eigen::Array3d validation_rmse = Eigen::Array3d::Zero();  // all-members ensemble
  double objective = 0.0;                                   // mean of the three
};

struct GridSearchResult {
  std::vector<GridPoint> table;  // lexicographic grid order
  std::size_t best_index = 0;
  ExperimentConfig best_config;
};

// Exhaustive search over the cartesian grid; ties keep the lexicographically
// earlier point. Scored on the validation slice only.
GridSearchResult grid_search(const ExperimentConfig& config,
                             const std::vector<double>& learning_rates,
                             const std::vector<int>& epoch_counts,
                             const std::vector<int>& hidden_sizes);
void write_grid_csv(const GridSearchResult& grid, const std::string& path);

}  // namespace epicast
