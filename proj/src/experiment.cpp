#include "epicast/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "epicast/errors.hpp"
#include "epicast/transfer.hpp"

namespace epicast {

using nlohmann::json;

std::vector<Date> rolling_origins(const DateRange& range, int horizon) {
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1");
  }
  std::vector<Date> origins;
  for (Date o = range.from; o + (horizon - 1) <= range.to; o = o + horizon) {
    origins.push_back(o);
  }
  if (origins.empty()) {
    throw Error(ErrorCode::OutOfRange,
                "range " + range.from.to_string() + ".." + range.to.to_string() +
                    " is shorter than one horizon of " + std::to_string(horizon) + " day(s)");
  }
  return origins;
}

namespace {

struct LoadedData {
  CountrySeries target;
  std::vector<std::pair<CountryEntry, CountrySeries>> sources;
};

LoadedData load_data(const ExperimentConfig& cfg) {
  LoadedData data{load_series(cfg.target_entry().csv_path, cfg.target,
                              cfg.target_entry().population_density),
                  {}};
  std::string failures;
  for (const CountryEntry& entry : cfg.source_entries()) {
    try {
      data.sources.emplace_back(entry,
                                load_series(entry.csv_path, entry.name, entry.population_density));
    } catch (const Error& e) {
      failures += (failures.empty() ? "" : "; ") + entry.name + ": " + e.what();
    }
  }
  if (!failures.empty()) {
    throw Error(ErrorCode::PartialFailure, "loading failed for " + failures);
  }
  return data;
}

CountrySeries context_before(const CountrySeries& target, Date origin, int lookback) {
  return split_by_dates(target, origin - lookback, origin - 1);
}

std::vector<ForecastResult> forecast_over_origins(const GruModel& model,
                                                  const CountrySeries& target,
                                                  const std::vector<Date>& origins, int horizon,
                                                  const std::string& member_id) {
  std::vector<ForecastResult> out;
  out.reserve(origins.size());
  for (Date origin : origins) {
    ForecastResult fc =
        recursive_forecast(model, context_before(target, origin, model.lookback), horizon, nullptr);
    fc.member_id = member_id;
    out.push_back(std::move(fc));
  }
  return out;
}

// Per-variable relative errors pooled over every (origin, day) pair, in
// origin order; Eq.-style sums over the pooled days.
void pooled_metrics(const CountrySeries& truth, const std::vector<ForecastResult>& forecasts,
                    Eigen::Array3d& rmse, Eigen::Array3d& rmae) {
  Eigen::Index total = 0;
  for (const ForecastResult& fc : forecasts) total += fc.horizon;
  FeatureMatrix original(total, kNumFeatures), predicted(total, kNumFeatures);
  Eigen::Index row = 0;
  for (const ForecastResult& fc : forecasts) {
    const CountrySeries slice =
        split_by_dates(truth, fc.start_date, fc.start_date + (fc.horizon - 1));
    original.middleRows(row, fc.horizon) = slice.to_matrix();
    predicted.middleRows(row, fc.horizon) = fc.values;
    row += fc.horizon;
  }
  for (int f = 0; f < kNumFeatures; ++f) {
    rmse[f] = rmse_relative(original.col(f), predicted.col(f));
    rmae[f] = rmae_relative(original.col(f), predicted.col(f));
  }
}

struct ValidationStage {
  std::vector<Date> validation_origins;
  std::vector<MemberRun> sources;
};

ValidationStage run_validation_stage(const ExperimentConfig& cfg, const LoadedData& data) {
  ValidationStage stage;
  stage.validation_origins = rolling_origins(cfg.dates.validate, cfg.horizon);

  std::string failures;
  for (std::size_t i = 0; i < data.sources.size(); ++i) {
    const auto& [entry, series] = data.sources[i];
    try {
      TrainConfig member_cfg = cfg.train;
      member_cfg.seed = cfg.train.seed + i;  // distinct inits, still seed-deterministic

      MemberRun member;
      member.name = entry.name;
      member.model = pretrain(series, cfg.dates.pretrain, cfg.lookback, member_cfg);
      if (cfg.finetune_enabled) {
        member.model = finetune(member.model, data.target, cfg.dates.finetune, member_cfg);
      }
      member.validation_forecasts = forecast_over_origins(
          member.model, data.target, stage.validation_origins, cfg.horizon, member.name);
      Eigen::Array3d rmse, rmae;
      pooled_metrics(data.target, member.validation_forecasts, rmse, rmae);
      member.score = ValidationScore{member.name, rmse};
      stage.sources.push_back(std::move(member));
    } catch (const Error& e) {
      failures += (failures.empty() ? "" : "; ") + entry.name + ": " + e.what();
    }
  }
  if (!failures.empty()) {
    throw Error(ErrorCode::PartialFailure, "member pipeline failed for " + failures);
  }
  return stage;
}

std::string sanitize_filename(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '+' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::string join_plus(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += "+";
    out += parts[i];
  }
  return out;
}

void format_row(std::ostream& out, const std::string& label, int n_members,
                const Eigen::Array3d& rmse, const Eigen::Array3d& rmae) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", n_members, rmse[0],
                rmae[0], rmse[1], rmae[1], rmse[2], rmae[2]);
  out << label << "," << buf << "\n";
}

}  // namespace

ExperimentOutput run_full_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.horizon > cfg.lookback) {
    std::cerr << "warning: horizon " << cfg.horizon << " exceeds look-back " << cfg.lookback
              << "; late recursive steps condition on predictions only\n";
  }

  const LoadedData data = load_data(cfg);

  ExperimentOutput out;
  out.test_origins = rolling_origins(cfg.dates.test, cfg.horizon);

  ValidationStage stage = run_validation_stage(cfg, data);
  out.validation_origins = std::move(stage.validation_origins);
  out.sources = std::move(stage.sources);

  // test forecasts per member
  for (MemberRun& member : out.sources) {
    member.test_forecasts =
        forecast_over_origins(member.model, data.target, out.test_origins, cfg.horizon, member.name);
  }

  // target-only baseline, trained on the target's pre-training slice
  {
    TrainConfig cfg_target = cfg.train;
    cfg_target.seed = cfg.train.seed + data.sources.size();
    out.target_only.name = cfg.target + "-only";
    out.target_only.model =
        train_target_only(data.target, cfg.dates.pretrain, cfg.lookback, cfg_target);
    out.target_only.test_forecasts = forecast_over_origins(
        out.target_only.model, data.target, out.test_origins, cfg.horizon, out.target_only.name);
  }

  // every non-empty member combination
  std::vector<std::string> member_names;
  for (const MemberRun& m : out.sources) member_names.push_back(m.name);
  std::vector<ValidationScore> all_scores;
  for (const MemberRun& m : out.sources) all_scores.push_back(m.score);

  out.table.regime = cfg.finetune_enabled ? "fine-tuned" : "not-fine-tuned";
  out.table.test_origins = out.test_origins;

  for (const std::vector<std::string>& subset : enumerate_combinations(member_names)) {
    CombinationResult combo;
    combo.members = subset;
    combo.label = join_plus(subset);

    std::vector<ValidationScore> subset_scores;
    std::vector<const MemberRun*> subset_members;
    for (const std::string& name : subset) {
      for (std::size_t i = 0; i < out.sources.size(); ++i) {
        if (out.sources[i].name == name) {
          subset_scores.push_back(all_scores[i]);
          subset_members.push_back(&out.sources[i]);
        }
      }
    }
    combo.spec = compute_weights(subset_scores, cfg.ensemble_mode, cfg.ensemble_aggregate);

    combo.combined.reserve(out.test_origins.size());
    for (std::size_t o = 0; o < out.test_origins.size(); ++o) {
      std::vector<ForecastResult> member_fcs;
      for (const MemberRun* m : subset_members) member_fcs.push_back(m->test_forecasts[o]);
      combo.combined.push_back(combine(member_fcs, combo.spec));
    }
    pooled_metrics(data.target, combo.combined, combo.rmse, combo.rmae);

    out.table.rows.push_back(
        {combo.label, static_cast<int>(subset.size()), combo.rmse, combo.rmae});
    out.combinations.push_back(std::move(combo));
  }

  // target-only row
  {
    Eigen::Array3d rmse, rmae;
    pooled_metrics(data.target, out.target_only.test_forecasts, rmse, rmae);
    out.table.rows.push_back({out.target_only.name, 1, rmse, rmae});
  }
  return out;
}

void write_result_table_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# test_origins:";
  for (std::size_t i = 0; i < table.test_origins.size(); ++i) {
    out << (i == 0 ? " " : ",") << table.test_origins[i].to_string();
  }
  out << "\n";
  out << "combination,n_members,new_cases_rmse,new_cases_rmae,new_deaths_rmse,new_deaths_rmae,"
         "active_cases_rmse,active_cases_rmae\n";
  for (const ResultRow& row : table.rows) {
    format_row(out, row.label, row.n_members, row.rmse, row.rmae);
  }
}

ResultTable read_result_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  ResultTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("test_origins:");
      if (pos != std::string::npos) {
        std::stringstream ss(line.substr(pos + 13));
        std::string token;
        while (std::getline(ss, token, ',')) {
          token.erase(0, token.find_first_not_of(' '));
          if (!token.empty()) table.test_origins.push_back(Date::parse(token));
        }
      }
      continue;
    }
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string token;
    std::vector<std::string> fields;
    while (std::getline(ss, token, ',')) fields.push_back(token);
    if (fields.size() != 8) {
      throw Error(ErrorCode::MalformedRow, path + ": expected 8 columns, got '" + line + "'");
    }
    ResultRow row;
    row.label = fields[0];
    row.n_members = std::stoi(fields[1]);
    row.rmse = Eigen::Array3d(std::stod(fields[2]), std::stod(fields[4]), std::stod(fields[6]));
    row.rmae = Eigen::Array3d(std::stod(fields[3]), std::stod(fields[5]), std::stod(fields[7]));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, path + " has no table rows");
  return table;
}

void write_experiment_outputs(const ExperimentOutput& output, const ExperimentConfig& cfg,
                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());

  write_result_table_csv(output.table, out_dir + "/results_table.csv");

  auto write_forecasts = [&out_dir](const std::vector<ForecastResult>& fcs,
                                    const std::string& label) {
    for (const ForecastResult& fc : fcs) {
      write_forecast_csv(fc, out_dir + "/forecast_" + sanitize_filename(label) + "_" +
                                 fc.start_date.to_string() + ".csv");
    }
  };
  for (const MemberRun& m : output.sources) write_forecasts(m.test_forecasts, m.name);
  write_forecasts(output.target_only.test_forecasts, output.target_only.name);
  for (const CombinationResult& combo : output.combinations) {
    if (combo.members.size() >= 2) write_forecasts(combo.combined, combo.label);
  }

  // ensemble report for the full member set
  json report;
  report["regime"] = output.table.regime;
  report["mode"] = to_string(cfg.ensemble_mode);
  report["aggregate"] = cfg.ensemble_aggregate;
  json members = json::array();
  for (const MemberRun& m : output.sources) members.push_back(m.name);
  report["members"] = members;
  if (!output.combinations.empty()) {
    const CombinationResult& full = output.combinations.back();
    json weights;
    for (int f = 0; f < kNumFeatures; ++f) {
      json col = json::array();
      for (Eigen::Index i = 0; i < full.spec.weights.rows(); ++i) {
        col.push_back(full.spec.weights(i, f));
      }
      weights[feature_name(f)] = col;
    }
    report["weights"] = weights;
  }
  json scores = json::array();
  for (const MemberRun& m : output.sources) {
    scores.push_back({{"member", m.name},
                      {"rmse", {m.score.rmse[0], m.score.rmse[1], m.score.rmse[2]}}});
  }
  report["validation_scores"] = scores;
  json vo = json::array(), to = json::array();
  for (Date d : output.validation_origins) vo.push_back(d.to_string());
  for (Date d : output.test_origins) to.push_back(d.to_string());
  report["validation_origins"] = vo;
  report["test_origins"] = to;

  std::ofstream rep(out_dir + "/ensemble_report.json");
  if (!rep) throw Error(ErrorCode::IoError, "cannot write ensemble_report.json");
  rep << report.dump(2) << "\n";
}

LookbackSweepResult lookback_sweep(const ExperimentConfig& cfg, const std::vector<int>& lookbacks,
                                   const std::vector<std::uint64_t>& seeds) {
  if (lookbacks.empty() || seeds.empty()) {
    throw Error(ErrorCode::InvalidConfig, "sweep needs at least one lookback and one seed");
  }
  for (int lb : lookbacks) {
    if (lb < 1) throw Error(ErrorCode::InvalidConfig, "lookback must be >= 1");
  }

  LookbackSweepResult result;
  result.lookbacks = lookbacks;
  result.seeds = seeds;
  result.per_seed_rmse.assign(seeds.size(), {});

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (int lb : lookbacks) {
      ExperimentConfig run_cfg = cfg;
      run_cfg.lookback = lb;
      run_cfg.train.seed = seeds[s];
      const ExperimentOutput out = run_full_experiment(run_cfg);
      // best combination per variable (the target-only row is not a combination)
      Eigen::Array3d best = out.combinations.front().rmse;
      for (const CombinationResult& combo : out.combinations) {
        best = best.min(combo.rmse);
      }
      result.per_seed_rmse[s].push_back(best);
    }
  }

  result.mean_rmse.assign(lookbacks.size(), Eigen::Array3d::Zero());
  for (std::size_t l = 0; l < lookbacks.size(); ++l) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      result.mean_rmse[l] += result.per_seed_rmse[s][l];
    }
    result.mean_rmse[l] /= static_cast<double>(seeds.size());
  }
  return result;
}

void write_lookback_sweep_csv(const LookbackSweepResult& sweep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# seeds:";
  for (std::size_t i = 0; i < sweep.seeds.size(); ++i) {
    out << (i == 0 ? " " : ",") << sweep.seeds[i];
  }
  out << "\n";
  out << "lookback,new_cases_rmse,new_deaths_rmse,active_cases_rmse\n";
  char buf[160];
  for (std::size_t l = 0; l < sweep.lookbacks.size(); ++l) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g", sweep.lookbacks[l],
                  sweep.mean_rmse[l][0], sweep.mean_rmse[l][1], sweep.mean_rmse[l][2]);
    out << buf << "\n";
  }
}

std::pair<double, double> mean_and_population_std(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::LengthMismatch, "no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

std::vector<StabilityRow> multi_seed_stability(const ExperimentConfig& cfg,
                                               const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "stability analysis needs >= 2 seeds");
  }
  std::vector<std::string> labels;
  std::vector<std::vector<Eigen::Array3d>> samples;  // [row][seed]
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.train.seed = seeds[s];
    const ExperimentOutput out = run_full_experiment(run_cfg);
    if (s == 0) {
      for (const ResultRow& row : out.table.rows) labels.push_back(row.label);
      samples.assign(labels.size(), {});
    }
    if (out.table.rows.size() != labels.size()) {
      throw Error(ErrorCode::PartialFailure, "row count changed across seeds");
    }
    for (std::size_t r = 0; r < labels.size(); ++r) {
      samples[r].push_back(out.table.rows[r].rmse);
    }
  }

  std::vector<StabilityRow> rows;
  rows.reserve(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    StabilityRow row;
    row.label = labels[r];
    for (int f = 0; f < kNumFeatures; ++f) {
      std::vector<double> vals;
      vals.reserve(samples[r].size());
      for (const Eigen::Array3d& a : samples[r]) vals.push_back(a[f]);
      const auto [mean, stddev] = mean_and_population_std(vals);
      row.mean_rmse[f] = mean;
      row.std_rmse[f] = stddev;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_stability_csv(const std::vector<StabilityRow>& rows,
                         const std::vector<std::uint64_t>& seeds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# seeds:";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i == 0 ? " " : ",") << seeds[i];
  out << "\n";
  out << "combination,new_cases_mean,new_cases_std,new_deaths_mean,new_deaths_std,"
         "active_cases_mean,active_cases_std\n";
  char buf[256];
  for (const StabilityRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", row.mean_rmse[0],
                  row.std_rmse[0], row.mean_rmse[1], row.std_rmse[1], row.mean_rmse[2],
                  row.std_rmse[2]);
    out << row.label << "," << buf << "\n";
  }
}

GridSearchResult grid_search(const ExperimentConfig& cfg,
                             const std::vector<double>& learning_rates,
                             const std::vector<int>& epoch_counts,
                             const std::vector<int>& hidden_sizes) {
  if (learning_rates.empty() || epoch_counts.empty() || hidden_sizes.empty()) {
    throw Error(ErrorCode::InvalidConfig, "grid must be non-empty on every axis");
  }
  cfg.validate();
  const LoadedData data = load_data(cfg);

  GridSearchResult result;
  bool have_best = false;
  double best_objective = 0.0;

  for (double lr : learning_rates) {
    for (int epochs : epoch_counts) {
      for (int hidden : hidden_sizes) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.train.learning_rate = lr;
        run_cfg.train.epochs = epochs;
        run_cfg.train.hidden_size = hidden;
        run_cfg.train.validate();

        const ValidationStage stage = run_validation_stage(run_cfg, data);
        std::vector<ValidationScore> scores;
        for (const MemberRun& m : stage.sources) scores.push_back(m.score);
        const EnsembleSpec spec =
            compute_weights(scores, run_cfg.ensemble_mode, run_cfg.ensemble_aggregate);

        std::vector<ForecastResult> combined;
        combined.reserve(stage.validation_origins.size());
        for (std::size_t o = 0; o < stage.validation_origins.size(); ++o) {
          std::vector<ForecastResult> member_fcs;
          for (const MemberRun& m : stage.sources) member_fcs.push_back(m.validation_forecasts[o]);
          combined.push_back(combine(member_fcs, spec));
        }
        Eigen::Array3d rmse, rmae;
        pooled_metrics(data.target, combined, rmse, rmae);

        GridPoint point{lr, epochs, hidden, rmse, rmse.mean()};
        result.table.push_back(point);
        if (!have_best || point.objective < best_objective) {  // strict: earlier point wins ties
          have_best = true;
          best_objective = point.objective;
          result.best_index = result.table.size() - 1;
        }
      }
    }
  }

  result.best_config = cfg;
  const GridPoint& best = result.table[result.best_index];
  result.best_config.train.learning_rate = best.learning_rate;
  result.best_config.train.epochs = best.epochs;
  result.best_config.train.hidden_size = best.hidden_size;
  return result;
}

void write_grid_csv(const GridSearchResult& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# best_index: " << grid.best_index << "\n";
  out << "learning_rate,epochs,hidden_size,new_cases_rmse,new_deaths_rmse,active_cases_rmse,"
         "objective\n";
  char buf[224];
  for (const GridPoint& p : grid.table) {
    std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g", p.learning_rate,
                  p.epochs, p.hidden_size, p.validation_rmse[0], p.validation_rmse[1],
                  p.validation_rmse[2], p.objective);
    out << buf << "\n";
  }
}

}  // namespace epicast
