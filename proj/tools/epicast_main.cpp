#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epicast/config.hpp"
#include "epicast/ensemble.hpp"
#include "epicast/errors.hpp"
#include "epicast/experiment.hpp"
#include "epicast/forecast.hpp"
#include "epicast/metrics.hpp"
#include "epicast/model_io.hpp"
#include "epicast/synth.hpp"
#include "epicast/transfer.hpp"

namespace {

using namespace epicast;
using nlohmann::json;

// Seed precedence: --seed flag, then EPICAST_SEED, then the config value.
void apply_seed(ExperimentConfig& cfg, const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) {
    cfg.train.seed = *flag_seed;
    return;
  }
  if (const char* env = std::getenv("EPICAST_SEED")) {
    cfg.train.seed = std::stoull(env);
  }
}

CountrySeries load_country(const ExperimentConfig& cfg, const std::string& name) {
  for (const CountryEntry& c : cfg.countries) {
    if (c.name == name) return load_series(c.csv_path, c.name, c.population_density);
  }
  throw Error(ErrorCode::InvalidConfig, "country '" + name + "' is not in the config");
}

// Validation scores (pooled per-variable RMSE over the validation origins)
// for already-trained models against the config's target.
std::vector<ValidationScore> score_models(const ExperimentConfig& cfg,
                                          const std::vector<GruModel>& models,
                                          const CountrySeries& target) {
  const std::vector<Date> origins = rolling_origins(cfg.dates.validate, cfg.horizon);
  std::vector<ValidationScore> scores;
  for (const GruModel& model : models) {
    std::vector<double> o[kNumFeatures], p[kNumFeatures];
    for (Date origin : origins) {
      const CountrySeries context = split_by_dates(target, origin - model.lookback, origin - 1);
      const ForecastResult fc = recursive_forecast(model, context, cfg.horizon, &std::cerr);
      const CountrySeries truth =
          split_by_dates(target, fc.start_date, fc.start_date + (fc.horizon - 1));
      const FeatureMatrix actual = truth.to_matrix();
      for (int f = 0; f < kNumFeatures; ++f) {
        for (int d = 0; d < fc.horizon; ++d) {
          o[f].push_back(actual(d, f));
          p[f].push_back(fc.values(d, f));
        }
      }
    }
    ValidationScore score;
    score.member_id = model.provenance;
    for (int f = 0; f < kNumFeatures; ++f) {
      const Eigen::Map<const Eigen::VectorXd> ov(o[f].data(),
                                                 static_cast<Eigen::Index>(o[f].size()));
      const Eigen::Map<const Eigen::VectorXd> pv(p[f].data(),
                                                 static_cast<Eigen::Index>(p[f].size()));
      score.rmse[f] = rmse_relative(ov, pv);
    }
    scores.push_back(std::move(score));
  }
  return scores;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(csv.substr(start));
      break;
    }
    out.push_back(csv.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

json report_to_json(const EvaluationReport& report) {
  json j;
  j["horizon"] = report.horizon;
  for (int f = 0; f < kNumFeatures; ++f) {
    j["rmse"][feature_name(f)] = report.rmse[f];
    j["rmae"][feature_name(f)] = report.rmae[f];
  }
  json days = json::array();
  for (Eigen::Index d = 0; d < report.per_day_relative_error.rows(); ++d) {
    days.push_back({report.per_day_relative_error(d, 0), report.per_day_relative_error(d, 1),
                    report.per_day_relative_error(d, 2)});
  }
  j["per_day_relative_error"] = days;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"GRU transfer-learning toolkit for multi-day epidemic forecasting"};
  app.require_subcommand(1);

  std::string config_path, out_path, country, model_path, models_csv, forecast_path, origin_text;
  std::optional<std::uint64_t> seed;
  int horizon_flag = 0;
  std::string seeds_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "seed override (also: EPICAST_SEED)");
    sub->add_option("--out", out_path, "output file or directory")->required();
  };

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic country CSV");
  std::string kind_text = "logistic-wave";
  int synth_days = 200;
  double synth_density = 100.0, synth_noise = -1.0, synth_amp = 10000.0, synth_center = 0.5,
         synth_width = 12.0;
  std::string synth_start = "2020-02-15", synth_name = "Synthia";
  std::uint64_t synth_seed = 0;
  synth_cmd->add_option("--kind", kind_text, "logistic-wave | two-wave | noisy");
  synth_cmd->add_option("--days", synth_days, "series length");
  synth_cmd->add_option("--seed", synth_seed, "noise seed");
  synth_cmd->add_option("--density", synth_density, "population density");
  synth_cmd->add_option("--noise", synth_noise, "multiplicative noise level");
  synth_cmd->add_option("--amplitude", synth_amp, "peak new cases");
  synth_cmd->add_option("--center", synth_center, "pulse center as fraction of span");
  synth_cmd->add_option("--width", synth_width, "pulse width in days");
  synth_cmd->add_option("--start-date", synth_start, "first day (YYYY-MM-DD)");
  synth_cmd->add_option("--name", synth_name, "country name");
  synth_cmd->add_option("--out", out_path, "output CSV")->required();

  auto* train_cmd = app.add_subcommand("train", "pre-train a model on one source country");
  add_common(train_cmd);
  train_cmd->add_option("--country", country, "source country name")->required();

  auto* finetune_cmd = app.add_subcommand("finetune", "fine-tune a model on the target country");
  add_common(finetune_cmd);
  finetune_cmd->add_option("--model", model_path, "pre-trained model file")->required();

  auto* forecast_cmd = app.add_subcommand("forecast", "recursive H-day forecast from a model");
  add_common(forecast_cmd);
  forecast_cmd->add_option("--model", model_path, "model file")->required();
  forecast_cmd->add_option("--origin", origin_text, "first forecast day (YYYY-MM-DD)")->required();
  forecast_cmd->add_option("--horizon", horizon_flag, "forecast days (default: config horizon)");

  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "score a forecast CSV against the target truth");
  add_common(evaluate_cmd);
  evaluate_cmd->add_option("--forecast", forecast_path, "forecast CSV")->required();

  auto* ensemble_cmd =
      app.add_subcommand("ensemble", "validation-RMSE weights for trained models");
  add_common(ensemble_cmd);
  ensemble_cmd->add_option("--models", models_csv, "comma-separated model files")->required();
  ensemble_cmd->add_option("--origin", origin_text, "also emit a combined forecast from this day");

  auto* experiment_cmd = app.add_subcommand("experiment", "run the full study");
  add_common(experiment_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep-lookback", "RMSE vs look-back curve");
  add_common(sweep_cmd);
  std::string lookbacks_text = "7:19";
  sweep_cmd->add_option("--lookbacks", lookbacks_text, "range a:b or comma list");
  sweep_cmd->add_option("--seeds", seeds_text, "comma list (default: config seeds)");

  auto* stability_cmd = app.add_subcommand("stability", "mean/std of RMSE across seeds");
  add_common(stability_cmd);
  stability_cmd->add_option("--seeds", seeds_text, "comma list (default: config seeds)");

  auto* grid_cmd = app.add_subcommand("grid-search", "exhaustive hyper-parameter search");
  add_common(grid_cmd);
  std::string lr_text = "0.001,0.01", epochs_text = "50,100", hidden_text = "16,32";
  grid_cmd->add_option("--lr", lr_text, "learning rates, comma list");
  grid_cmd->add_option("--epochs", epochs_text, "epoch counts, comma list");
  grid_cmd->add_option("--hidden", hidden_text, "hidden sizes, comma list");

  CLI11_PARSE(app, argc, argv);

  auto parse_int_list = [](const std::string& text) {
    std::vector<int> out;
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
      const int a = std::stoi(text.substr(0, colon));
      const int b = std::stoi(text.substr(colon + 1));
      for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
      for (const std::string& tok : split_list(text)) out.push_back(std::stoi(tok));
    }
    return out;
  };

  if (synth_cmd->parsed()) {
    SynthParams params;
    params.amplitude = synth_amp;
    params.center_fraction = synth_center;
    params.width = synth_width;
    params.population_density = synth_density;
    params.start_date = Date::parse(synth_start);
    if (synth_noise >= 0.0) params.noise_level = synth_noise;
    const CountrySeries series = generate_synthetic(synth_kind_from_string(kind_text), synth_days,
                                                    synth_seed, params, synth_name);
    write_series_csv(series, out_path);
    std::cerr << "wrote " << series.size() << " days to " << out_path << "\n";
    return 0;
  }

  ExperimentConfig cfg = load_config(config_path);
  apply_seed(cfg, seed);

  auto parse_seed_list = [&]() {
    if (seeds_text.empty()) return cfg.seeds;
    std::vector<std::uint64_t> out;
    for (const std::string& tok : split_list(seeds_text)) out.push_back(std::stoull(tok));
    return out;
  };

  if (train_cmd->parsed()) {
    const CountrySeries source = load_country(cfg, country);
    const GruModel model = pretrain(source, cfg.dates.pretrain, cfg.lookback, cfg.train);
    save_model(model, out_path);
    std::cerr << "trained '" << model.provenance << "' -> " << out_path << "\n";
    return 0;
  }

  if (finetune_cmd->parsed()) {
    const GruModel base = load_model(model_path);
    const CountrySeries target = load_country(cfg, cfg.target);
    const GruModel tuned = finetune(base, target, cfg.dates.finetune, cfg.train);
    save_model(tuned, out_path);
    std::cerr << "fine-tuned '" << tuned.provenance << "' -> " << out_path << "\n";
    return 0;
  }

  if (forecast_cmd->parsed()) {
    const GruModel model = load_model(model_path);
    const CountrySeries target = load_country(cfg, cfg.target);
    const Date origin = Date::parse(origin_text);
    const int horizon = horizon_flag > 0 ? horizon_flag : cfg.horizon;
    const CountrySeries context = split_by_dates(target, origin - model.lookback, origin - 1);
    const ForecastResult fc = recursive_forecast(model, context, horizon, &std::cerr);
    write_forecast_csv(fc, out_path);
    std::cerr << "forecast " << fc.start_date.to_string() << " +" << horizon << "d -> "
              << out_path << "\n";
    return 0;
  }

  if (evaluate_cmd->parsed()) {
    const CountrySeries target = load_country(cfg, cfg.target);
    const ForecastResult fc = read_forecast_csv(forecast_path);
    const EvaluationReport report = evaluate_forecast(target, fc);
    json j = report_to_json(report);
    j["member_id"] = fc.member_id;
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + out_path + "'");
    out << j.dump(2) << "\n";
    std::cerr << "evaluation -> " << out_path << "\n";
    return 0;
  }

  if (ensemble_cmd->parsed()) {
    std::vector<GruModel> models;
    for (const std::string& path : split_list(models_csv)) models.push_back(load_model(path));
    const CountrySeries target = load_country(cfg, cfg.target);
    const std::vector<ValidationScore> scores = score_models(cfg, models, target);
    const EnsembleSpec spec = compute_weights(scores, cfg.ensemble_mode, cfg.ensemble_aggregate);

    std::filesystem::create_directories(out_path);
    json report;
    report["mode"] = to_string(spec.mode);
    report["aggregate"] = cfg.ensemble_aggregate;
    report["members"] = spec.member_ids;
    for (int f = 0; f < kNumFeatures; ++f) {
      json col = json::array();
      for (Eigen::Index i = 0; i < spec.weights.rows(); ++i) col.push_back(spec.weights(i, f));
      report["weights"][feature_name(f)] = col;
    }
    json score_arr = json::array();
    for (const ValidationScore& s : scores) {
      score_arr.push_back({{"member", s.member_id}, {"rmse", {s.rmse[0], s.rmse[1], s.rmse[2]}}});
    }
    report["validation_scores"] = score_arr;

    if (!origin_text.empty()) {
      const Date origin = Date::parse(origin_text);
      std::vector<ForecastResult> fcs;
      for (std::size_t i = 0; i < models.size(); ++i) {
        const CountrySeries context =
            split_by_dates(target, origin - models[i].lookback, origin - 1);
        ForecastResult fc = recursive_forecast(models[i], context, cfg.horizon, &std::cerr);
        fc.member_id = spec.member_ids[i];
        write_forecast_csv(fc, out_path + "/forecast_member" + std::to_string(i) + "_" +
                                   origin.to_string() + ".csv");
        fcs.push_back(std::move(fc));
      }
      const ForecastResult combined = combine(fcs, spec);
      write_forecast_csv(combined, out_path + "/forecast_combined_" + origin.to_string() + ".csv");
      report["combined_forecast"] = "forecast_combined_" + origin.to_string() + ".csv";
    }

    std::ofstream out(out_path + "/ensemble_report.json");
    if (!out) throw Error(ErrorCode::IoError, "cannot write ensemble_report.json");
    out << report.dump(2) << "\n";
    std::cerr << "ensemble report -> " << out_path << "/ensemble_report.json\n";
    return 0;
  }

  if (experiment_cmd->parsed()) {
    const ExperimentOutput output = run_full_experiment(cfg);
    write_experiment_outputs(output, cfg, out_path);
    std::cerr << "experiment (" << output.table.regime << ", " << output.table.rows.size()
              << " rows) -> " << out_path << "/results_table.csv\n";
    return 0;
  }

  if (sweep_cmd->parsed()) {
    const std::vector<int> lookbacks = parse_int_list(lookbacks_text);
    const LookbackSweepResult sweep = lookback_sweep(cfg, lookbacks, parse_seed_list());
    std::filesystem::create_directories(out_path);
    write_lookback_sweep_csv(sweep, out_path + "/lookback_sweep.csv");
    std::cerr << "sweep over " << lookbacks.size() << " look-backs -> " << out_path
              << "/lookback_sweep.csv\n";
    return 0;
  }

  if (stability_cmd->parsed()) {
    const auto seeds_list = parse_seed_list();
    const std::vector<StabilityRow> rows = multi_seed_stability(cfg, seeds_list);
    std::filesystem::create_directories(out_path);
    write_stability_csv(rows, seeds_list, out_path + "/stability.csv");
    std::cerr << rows.size() << " combinations over " << seeds_list.size() << " seeds -> "
              << out_path << "/stability.csv\n";
    return 0;
  }

  if (grid_cmd->parsed()) {
    std::vector<double> lrs;
    for (const std::string& tok : split_list(lr_text)) lrs.push_back(std::stod(tok));
    const GridSearchResult grid =
        grid_search(cfg, lrs, parse_int_list(epochs_text), parse_int_list(hidden_text));
    std::filesystem::create_directories(out_path);
    write_grid_csv(grid, out_path + "/grid.csv");
    save_config(grid.best_config, out_path + "/best_config.json");
    const GridPoint& best = grid.table[grid.best_index];
    std::cerr << "best: lr " << best.learning_rate << ", epochs " << best.epochs << ", hidden "
              << best.hidden_size << " -> " << out_path << "/grid.csv\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const epicast::Error& e) {
    json err{{"error", {{"code", e.code_name()}, {"message", e.what()}}}};
    std::cout << err.dump() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    std::cout << err.dump() << std::endl;
    return 1;
  }
}
