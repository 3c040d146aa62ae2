// Acceptance suite: one self-contained check per shipped guarantee, each
// printed as a PASS/FAIL line. Oracles here (finite differences, brute-force
// metric loops) are deliberately independent re-implementations.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epicast/config.hpp"
#include "epicast/ensemble.hpp"
#include "epicast/errors.hpp"
#include "epicast/experiment.hpp"
#include "epicast/forecast.hpp"
#include "epicast/gru.hpp"
#include "epicast/metrics.hpp"
#include "epicast/synth.hpp"
#include "epicast/transfer.hpp"

using namespace epicast;
namespace fs = std::filesystem;

namespace {

const std::string kWorkDir = (fs::temp_directory_path() / "epicast_acceptance").string();

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness
// ---------------------------------------------------------------------------

bool check_gradients(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double worst_rel = 0.0;
  long components = 0;

  for (int instance = 0; instance < 20; ++instance) {
    const int hidden = 1 + static_cast<int>(rng() % 8);
    const int lookback = 1 + static_cast<int>(rng() % 5);
    const GruParams params = init_params(kNumFeatures, hidden, rng());
    FeatureMatrix window(lookback, kNumFeatures);
    for (int r = 0; r < lookback; ++r) {
      for (int f = 0; f < kNumFeatures; ++f) window(r, f) = uniform01(rng);
    }
    FeatureVec target{uniform01(rng), uniform01(rng), uniform01(rng)};

    const Eigen::VectorXd analytic = flatten(backprop_window(window, target, params));
    Eigen::VectorXd flat = flatten(params);
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      const double saved = flat[i];
      flat[i] = saved + eps;
      const double up =
          loss_mse(forward_window(window, unflatten(flat, kNumFeatures, hidden)), target);
      flat[i] = saved - eps;
      const double down =
          loss_mse(forward_window(window, unflatten(flat, kNumFeatures, hidden)), target);
      flat[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      ++components;
      if (std::abs(numeric) < 1e-4) {
        if (std::abs(analytic[i] - numeric) >= 1e-7) {
          detail = "absolute mismatch at component " + std::to_string(i);
          return false;
        }
      } else {
        const double rel = std::abs(analytic[i] - numeric) / std::abs(numeric);
        worst_rel = std::max(worst_rel, rel);
        if (rel >= 1e-4) {
          detail = "relative mismatch " + std::to_string(rel) + " at component " +
                   std::to_string(i);
          return false;
        }
      }
    }
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << components << " components over 20 instances, worst rel err " << worst_rel << ", "
     << secs << " s";
  detail = os.str();
  return secs < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Metric oracle
// ---------------------------------------------------------------------------

bool check_metric_oracle(std::string& detail) {
  std::mt19937_64 rng(515);
  double worst = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 30);
    Eigen::VectorXd o(d), p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      o[i] = (rng() % 2 ? 1.0 : -1.0) * (0.5 + 1.5 * uniform01(rng));
      p[i] = 4.0 * uniform01(rng) - 2.0;
    }
    double brute_rmse = 0.0, brute_rmae = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double e = (o[i] - p[i]) / o[i];
      brute_rmse += e * e;
      brute_rmae += std::fabs(e);
    }
    const double diff_rmse = std::abs(rmse_relative(o, p) - brute_rmse);
    const double diff_rmae = std::abs(rmae_relative(o, p) - brute_rmae);
    worst = std::max({worst, diff_rmse, diff_rmae});
    if (diff_rmse > 1e-12 || diff_rmae > 1e-12) {
      detail = "pair " + std::to_string(pair) + " differs by " +
               std::to_string(std::max(diff_rmse, diff_rmae));
      return false;
    }
  }
  std::ostringstream os;
  os << "1000 pairs, worst abs diff " << worst;
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 3. Ensemble algebra
// ---------------------------------------------------------------------------

bool check_ensemble_algebra(std::string& detail) {
  std::mt19937_64 rng(99);

  // weight normalisation across random score sets, both modes
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ValidationScore> scores;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      scores.push_back({"m" + std::to_string(i),
                        Eigen::Array3d{0.001 + uniform01(rng), 0.001 + uniform01(rng),
                                       0.001 + uniform01(rng)}});
    }
    for (WeightMode mode : {WeightMode::literal, WeightMode::inverse}) {
      const EnsembleSpec spec = compute_weights(scores, mode);
      for (int f = 0; f < kNumFeatures; ++f) {
        if (std::abs(spec.weights.col(f).sum() - 1.0) > 1e-12) {
          detail = "weights do not sum to 1";
          return false;
        }
        if (spec.weights.col(f).minCoeff() < 0.0) {
          detail = "negative weight";
          return false;
        }
      }
    }
  }

  // identical members come back bit-for-bit
  auto flat_forecast = [](const std::string& id, int horizon) {
    ForecastResult fc;
    fc.start_date = Date::parse("2021-04-16");
    fc.horizon = horizon;
    fc.member_id = id;
    fc.values = FeatureMatrix(horizon, kNumFeatures);
    return fc;
  };
  {
    ForecastResult a = flat_forecast("a", 7), b = flat_forecast("b", 7);
    std::mt19937_64 vals(7);
    for (int d = 0; d < 7; ++d) {
      for (int f = 0; f < kNumFeatures; ++f) {
        a.values(d, f) = 1000.0 * uniform01(vals);
        b.values(d, f) = a.values(d, f);
      }
    }
    const EnsembleSpec spec = compute_weights(
        {{"a", Eigen::Array3d{0.013, 0.07, 0.5}}, {"b", Eigen::Array3d{0.029, 0.02, 0.9}}},
        WeightMode::literal);
    const ForecastResult combined = combine({a, b}, spec);
    if (combined.values != a.values) {
      detail = "identical members did not combine bit-for-bit";
      return false;
    }
  }

  // convexity under random weights and members
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<ValidationScore> scores;
    std::vector<ForecastResult> fcs;
    for (int i = 0; i < n; ++i) {
      const std::string id = "m" + std::to_string(i);
      scores.push_back({id, Eigen::Array3d{0.01 + uniform01(rng), 0.01 + uniform01(rng),
                                           0.01 + uniform01(rng)}});
      ForecastResult fc = flat_forecast(id, 5);
      for (int d = 0; d < 5; ++d) {
        for (int f = 0; f < kNumFeatures; ++f) fc.values(d, f) = 100.0 * uniform01(rng);
      }
      fcs.push_back(std::move(fc));
    }
    const ForecastResult combined = combine(fcs, compute_weights(scores, WeightMode::inverse));
    for (int d = 0; d < 5; ++d) {
      for (int f = 0; f < kNumFeatures; ++f) {
        double lo = fcs[0].values(d, f), hi = lo;
        for (const auto& fc : fcs) {
          lo = std::min(lo, fc.values(d, f));
          hi = std::max(hi, fc.values(d, f));
        }
        if (combined.values(d, f) < lo || combined.values(d, f) > hi) {
          detail = "combined value escaped the member envelope";
          return false;
        }
      }
    }
  }

  // the published two-member example
  const EnsembleSpec table1 = compute_weights({{"Spain", Eigen::Array3d::Constant(0.0239)},
                                               {"Brazil", Eigen::Array3d::Constant(0.0338)}},
                                              WeightMode::literal);
  if (std::abs(table1.weights(0, 0) - 0.41421) > 1e-5 ||
      std::abs(table1.weights(1, 0) - 0.58579) > 1e-5) {
    detail = "two-member literal weights off: " + std::to_string(table1.weights(0, 0)) + ", " +
             std::to_string(table1.weights(1, 0));
    return false;
  }

  detail = "normalisation, fixed point, convexity, two-member example";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Recursion contract
// ---------------------------------------------------------------------------

bool check_recursion_contract(std::string& detail) {
  std::vector<DayRecord> records;
  Date day = Date::parse("2021-04-01");
  for (int i = 0; i < 14; ++i, ++day) {
    records.push_back({day, 100.0 + 7.0 * i, 5.0 + 0.5 * i, 1000.0 + 40.0 * i});
  }
  const CountrySeries context = make_country_series("Ctx", 80.0, records);

  // H = 1 equals the one-step prediction exactly
  GruModel model;
  model.params = init_params(3, 6, 4242);
  model.scaler = FeatureScaler(Eigen::Array3d{0.0, 0.0, 0.0}, Eigen::Array3d{3.0, 0.2, 20.0});
  model.lookback = 14;
  model.provenance = "m";
  const ForecastResult one = recursive_forecast(model, context, 1);
  const FeatureMatrix window = model.scaler.apply(normalize_by_density(context).to_matrix());
  FeatureMatrix scaled(1, kNumFeatures);
  scaled.row(0) = forward_window(window, model.params).transpose();
  const FeatureMatrix expected =
      (model.scaler.invert(scaled) * context.population_density).cwiseMax(0.0);
  if (one.values != expected) {
    detail = "H = 1 differs from the one-step prediction";
    return false;
  }

  // persistence stub: constant forecast rows
  const OneStepFn stub = [](const FeatureMatrix& w) -> FeatureVec {
    return w.row(w.rows() - 1).transpose();
  };
  const ForecastResult constant =
      recursive_forecast_with(stub, model.scaler, 14, context, 7, "stub");
  for (int i = 1; i < 7; ++i) {
    if (constant.values.row(i) != constant.values.row(0)) {
      detail = "persistence stub forecast is not constant";
      return false;
    }
  }
  const FeatureVec last = context.days.back().features();
  for (int f = 0; f < kNumFeatures; ++f) {
    if (std::abs(constant.values(0, f) - last[f]) > 1e-9 * std::max(1.0, last[f])) {
      detail = "persistence stub strayed from the last context day";
      return false;
    }
  }

  // the window shows exactly L rows to the model at every recursive step
  std::vector<Eigen::Index> lengths;
  const OneStepFn spy = [&lengths](const FeatureMatrix& w) -> FeatureVec {
    lengths.push_back(w.rows());
    return w.row(w.rows() - 1).transpose();
  };
  recursive_forecast_with(spy, model.scaler, 14, context, 9, "spy");
  if (lengths.size() != 9) {
    detail = "expected 9 recursive steps";
    return false;
  }
  for (Eigen::Index n : lengths) {
    if (n != 14) {
      detail = "window length drifted to " + std::to_string(n);
      return false;
    }
  }

  detail = "H=1 equality, persistence fixed point, fixed window length";
  return true;
}

// ---------------------------------------------------------------------------
// experiment fixtures (criteria 5-8)
// ---------------------------------------------------------------------------

ExperimentConfig synthetic_experiment_config(const std::string& dir, int n_sources) {
  fs::create_directories(dir);
  const Date start = Date::parse("2020-02-15");

  ExperimentConfig cfg;
  for (int i = 0; i < n_sources; ++i) {
    SynthParams params;
    params.amplitude = 9000.0 + 1500.0 * i;
    params.center_fraction = 0.42 + 0.04 * i;
    params.population_density = 60.0 + 30.0 * i;
    const std::string name = "Alpha" + std::to_string(i);
    write_series_csv(generate_synthetic(SynthKind::logistic_wave, 160, 0, params, name),
                     dir + "/" + name + ".csv");
    cfg.countries.push_back({name, dir + "/" + name + ".csv", params.population_density});
  }
  SynthParams target_params;
  target_params.amplitude = 7500.0;
  target_params.center_fraction = 0.55;
  target_params.population_density = 110.0;
  write_series_csv(generate_synthetic(SynthKind::logistic_wave, 160, 0, target_params, "Tango"),
                   dir + "/Tango.csv");
  cfg.countries.push_back({"Tango", dir + "/Tango.csv", target_params.population_density});
  cfg.target = "Tango";

  cfg.dates.pretrain = {start, start + 99};
  cfg.dates.finetune = {start + 60, start + 109};
  cfg.dates.validate = {start + 110, start + 123};  // two 7-day origins
  cfg.dates.test = {start + 124, start + 137};      // two 7-day origins
  cfg.lookback = 14;
  cfg.horizon = 7;
  cfg.train.epochs = 8;
  cfg.train.batch_size = 16;
  cfg.train.hidden_size = 8;
  cfg.train.learning_rate = 1e-2;
  cfg.train.seed = 0;
  cfg.seeds = {0, 1};
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// 5. Determinism of the experiment CLI
// ---------------------------------------------------------------------------

bool check_determinism(std::string& detail) {
  const std::string dir = kWorkDir + "/determinism";
  const ExperimentConfig cfg = synthetic_experiment_config(dir, 2);
  save_config(cfg, dir + "/config.json");

  const char* bin = std::getenv("EPICAST_BIN");
  if (bin != nullptr && *bin != '\0') {
    const std::string base = std::string(bin) + " experiment --config " + dir +
                             "/config.json --seed 7 --out " + dir;
    const int rc_a = std::system((base + "/run_a >/dev/null 2>&1").c_str());
    const int rc_b = std::system((base + "/run_b >/dev/null 2>&1").c_str());
    if (rc_a != 0 || rc_b != 0) {
      detail = "experiment subcommand exited nonzero";
      return false;
    }
    detail = "two CLI runs, byte-identical results_table.csv";
  } else {
    ExperimentConfig seeded = cfg;
    seeded.train.seed = 7;
    write_experiment_outputs(run_full_experiment(seeded), seeded, dir + "/run_a");
    write_experiment_outputs(run_full_experiment(seeded), seeded, dir + "/run_b");
    detail = "two library runs (EPICAST_BIN unset), byte-identical results_table.csv";
  }

  const std::string a = slurp(dir + "/run_a/results_table.csv");
  const std::string b = slurp(dir + "/run_b/results_table.csv");
  if (a.empty() || a != b) {
    detail = "results_table.csv bytes differ between runs";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Structural reproduction
// ---------------------------------------------------------------------------

bool check_structure(std::string& detail) {
  const std::string dir = kWorkDir + "/structure";
  ExperimentConfig cfg = synthetic_experiment_config(dir, 4);
  cfg.train.epochs = 4;

  cfg.finetune_enabled = true;
  const ExperimentOutput tuned = run_full_experiment(cfg);
  cfg.finetune_enabled = false;
  const ExperimentOutput frozen = run_full_experiment(cfg);

  if (tuned.table.rows.size() != 16 || frozen.table.rows.size() != 16) {
    detail = "expected 16 rows, got " + std::to_string(tuned.table.rows.size()) + " / " +
             std::to_string(frozen.table.rows.size());
    return false;
  }
  bool any_error_differs = false;
  for (std::size_t r = 0; r < 16; ++r) {
    const ResultRow& a = tuned.table.rows[r];
    const ResultRow& b = frozen.table.rows[r];
    if (a.label != b.label || a.n_members != b.n_members) {
      detail = "row " + std::to_string(r) + " structure differs between regimes";
      return false;
    }
    if ((a.rmse != b.rmse).any() || (a.rmae != b.rmae).any()) any_error_differs = true;
  }
  if (tuned.test_origins != frozen.test_origins) {
    detail = "test origins differ between regimes";
    return false;
  }
  if (!any_error_differs) {
    detail = "regimes produced identical errors; fine-tuning had no effect";
    return false;
  }
  detail = "16 rows per regime, identical structure, errors differ";
  return true;
}

// ---------------------------------------------------------------------------
// 7. Transfer-learning sanity at desk scale
// ---------------------------------------------------------------------------

double pooled_mean_rmae(const CountrySeries& target, const std::vector<ForecastResult>& fcs) {
  Eigen::Index total = 0;
  for (const ForecastResult& fc : fcs) total += fc.horizon;
  FeatureMatrix original(total, kNumFeatures), predicted(total, kNumFeatures);
  Eigen::Index row = 0;
  for (const ForecastResult& fc : fcs) {
    const CountrySeries truth =
        split_by_dates(target, fc.start_date, fc.start_date + (fc.horizon - 1));
    original.middleRows(row, fc.horizon) = truth.to_matrix();
    predicted.middleRows(row, fc.horizon) = fc.values;
    row += fc.horizon;
  }
  Eigen::Array3d rmae;
  for (int f = 0; f < kNumFeatures; ++f) {
    rmae[f] = rmae_relative(original.col(f), predicted.col(f));
  }
  return rmae.mean();
}

bool check_transfer_sanity(std::string& detail) {
  const auto start_time = std::chrono::steady_clock::now();
  const Date start = Date::parse("2020-02-15");

  SynthParams source_params;  // noiseless logistic-wave family
  source_params.amplitude = 10000.0;
  source_params.center_fraction = 0.5;
  source_params.population_density = 100.0;
  const CountrySeries source =
      generate_synthetic(SynthKind::logistic_wave, 160, 0, source_params, "Source");

  SynthParams target_params = source_params;  // amplitude-and-phase-shifted variant
  target_params.amplitude = 6000.0;
  target_params.center_fraction = 0.62;
  target_params.population_density = 90.0;
  const CountrySeries target =
      generate_synthetic(SynthKind::logistic_wave, 160, 0, target_params, "Target");

  const DateRange pretrain_range{start, start + 119};
  const DateRange finetune_range{start + 60, start + 119};  // through the target's own decline
  const int lookback = 14;
  const int horizon = 7;
  const std::vector<Date> origins =
      rolling_origins({start + 120, start + 140}, horizon);  // 3 origins into the decline

  auto forecasts_for = [&](const GruModel& model) {
    std::vector<ForecastResult> fcs;
    for (Date origin : origins) {
      const CountrySeries context = split_by_dates(target, origin - lookback, origin - 1);
      fcs.push_back(recursive_forecast(model, context, horizon, nullptr));
    }
    return fcs;
  };

  std::vector<ForecastResult> persistence;
  for (Date origin : origins) {
    const CountrySeries context = split_by_dates(target, origin - lookback, origin - 1);
    persistence.push_back(persistence_baseline(context, horizon));
  }
  const double rmae_persistence = pooled_mean_rmae(target, persistence);

  int finetune_wins = 0;
  int both_beat_persistence = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrainConfig cfg;
    cfg.learning_rate = 1e-2;
    cfg.epochs = 60;
    cfg.batch_size = 16;
    cfg.hidden_size = 8;
    cfg.seed = seed;

    const GruModel plain = pretrain(source, pretrain_range, lookback, cfg);
    const GruModel tuned = finetune(plain, target, finetune_range, cfg);

    const double rmae_plain = pooled_mean_rmae(target, forecasts_for(plain));
    const double rmae_tuned = pooled_mean_rmae(target, forecasts_for(tuned));

    if (rmae_tuned <= rmae_plain) ++finetune_wins;
    if (rmae_tuned < rmae_persistence && rmae_plain < rmae_persistence) {
      ++both_beat_persistence;
    }
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  std::ostringstream os;
  os << "fine-tuned <= plain in " << finetune_wins << "/20, both beat persistence in "
     << both_beat_persistence << "/20, " << secs << " s";
  detail = os.str();
  return finetune_wins >= 15 && both_beat_persistence >= 15 && secs < 300.0;
}

// ---------------------------------------------------------------------------
// 8. Look-back sweep shape
// ---------------------------------------------------------------------------

bool check_lookback_sweep(std::string& detail) {
  const std::string dir = kWorkDir + "/sweep";
  fs::create_directories(dir);
  const Date start = Date::parse("2020-02-15");

  ExperimentConfig cfg;
  {
    // mild observation noise gives the look-back curve a real interior basin
    SynthParams source_params;
    source_params.amplitude = 8000.0;
    source_params.second_amplitude = 5000.0;
    source_params.center_fraction = 0.45;
    source_params.second_center_fraction = 0.75;
    source_params.population_density = 70.0;
    source_params.noise_level = 0.05;
    write_series_csv(generate_synthetic(SynthKind::two_wave, 200, 0, source_params, "Wave"),
                     dir + "/Wave.csv");
    cfg.countries.push_back({"Wave", dir + "/Wave.csv", source_params.population_density});

    SynthParams target_params;
    target_params.amplitude = 10000.0;
    target_params.second_amplitude = 6000.0;
    target_params.population_density = 120.0;
    target_params.noise_level = 0.05;
    write_series_csv(generate_synthetic(SynthKind::two_wave, 200, 0, target_params, "Tide"),
                     dir + "/Tide.csv");
    cfg.countries.push_back({"Tide", dir + "/Tide.csv", target_params.population_density});
  }
  cfg.target = "Tide";
  cfg.dates.pretrain = {start, start + 159};
  cfg.dates.finetune = {start + 100, start + 159};
  cfg.dates.validate = {start + 160, start + 173};
  cfg.dates.test = {start + 174, start + 194};
  cfg.lookback = 14;
  cfg.horizon = 7;
  cfg.train.epochs = 60;
  cfg.train.batch_size = 16;
  cfg.train.hidden_size = 8;
  cfg.train.learning_rate = 1e-2;

  std::vector<int> lookbacks;
  for (int lb = 7; lb <= 19; ++lb) lookbacks.push_back(lb);
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

  const LookbackSweepResult sweep = lookback_sweep(cfg, lookbacks, seeds);

  if (sweep.mean_rmse.size() != 13) {
    detail = "expected 13 sweep points, got " + std::to_string(sweep.mean_rmse.size());
    return false;
  }
  for (const Eigen::Array3d& point : sweep.mean_rmse) {
    if (!point.isFinite().all()) {
      detail = "non-finite sweep point";
      return false;
    }
  }

  std::vector<int> selected;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    int best_idx = 0;
    double best = sweep.per_seed_rmse[s][0].mean();
    for (std::size_t l = 1; l < lookbacks.size(); ++l) {
      const double v = sweep.per_seed_rmse[s][l].mean();
      if (v < best) {
        best = v;
        best_idx = static_cast<int>(l);
      }
    }
    selected.push_back(lookbacks[static_cast<std::size_t>(best_idx)]);
  }
  std::vector<int> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  const int median = sorted[sorted.size() / 2];

  std::ostringstream os;
  os << "selected look-backs:";
  for (int lb : selected) os << " " << lb;
  os << " (median " << median << ")";
  detail = os.str();

  for (int lb : selected) {
    if (std::abs(lb - median) > 2) return false;
  }
  return true;
}

}  // namespace

int main() {
  fs::create_directories(kWorkDir);

  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"gradient-correctness", check_gradients},
      {"metric-oracle", check_metric_oracle},
      {"ensemble-algebra", check_ensemble_algebra},
      {"recursion-contract", check_recursion_contract},
      {"experiment-determinism", check_determinism},
      {"structural-reproduction", check_structure},
      {"transfer-sanity", check_transfer_sanity},
      {"lookback-sweep-shape", check_lookback_sweep},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << ": " << criterion.name
              << (detail.empty() ? "" : " - " + detail) << "\n";
    if (!ok) ++failures;
  }
  return failures;
}
