#include "epicast/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epicast/errors.hpp"

namespace epicast {

using nlohmann::json;

DateProtocol DateProtocol::defaults() {
  DateProtocol p;
  p.pretrain = {Date::from_ymd(2020, 2, 15), Date::from_ymd(2021, 4, 16)};
  p.finetune = {Date::from_ymd(2021, 1, 1), Date::from_ymd(2021, 3, 31)};
  p.validate = {Date::from_ymd(2021, 4, 1), Date::from_ymd(2021, 4, 15)};
  p.test = {Date::from_ymd(2021, 4, 16), Date::from_ymd(2021, 6, 4)};
  return p;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (countries.empty()) fail("config lists no countries");
  if (target.empty()) fail("config names no target country");
  bool target_found = false;
  for (std::size_t i = 0; i < countries.size(); ++i) {
    const CountryEntry& c = countries[i];
    if (c.name.empty()) fail("country entry without a name");
    if (!(c.population_density > 0.0)) fail("population_density for " + c.name + " must be > 0");
    if (c.name == target) target_found = true;
    for (std::size_t j = i + 1; j < countries.size(); ++j) {
      if (countries[j].name == c.name) fail("country '" + c.name + "' is listed twice");
    }
  }
  if (!target_found) fail("target '" + target + "' is not among the configured countries");
  if (source_entries().empty()) fail("no source countries besides the target");
  if (lookback < 1) fail("lookback must be >= 1");
  if (horizon < 1) fail("horizon must be >= 1");
  for (const auto& [label, range] :
       {std::pair<const char*, const DateRange&>{"pretrain", dates.pretrain},
        {"finetune", dates.finetune},
        {"validate", dates.validate},
        {"test", dates.test}}) {
    if (range.from > range.to) fail(std::string(label) + " date range is inverted");
  }
  train.validate();
}

const CountryEntry& ExperimentConfig::target_entry() const {
  for (const CountryEntry& c : countries) {
    if (c.name == target) return c;
  }
  throw Error(ErrorCode::InvalidConfig, "target '" + target + "' is not configured");
}

std::vector<CountryEntry> ExperimentConfig::source_entries() const {
  std::vector<CountryEntry> sources;
  for (const CountryEntry& c : countries) {
    if (c.name != target) sources.push_back(c);
  }
  return sources;
}

namespace {

Date parse_date_field(const json& j, const std::string& key, Date fallback) {
  if (!j.contains(key)) return fallback;
  const auto text = j.at(key).get<std::string>();
  const auto date = Date::try_parse(text);
  if (!date) throw Error(ErrorCode::InvalidConfig, "bad date '" + text + "' for " + key);
  return *date;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& origin_label) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, origin_label + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("countries")) {
      for (const json& c : j.at("countries")) {
        CountryEntry entry;
        entry.name = c.at("name").get<std::string>();
        entry.csv_path = c.value("csv_path", std::string{});
        entry.population_density = c.at("population_density").get<double>();
        cfg.countries.push_back(std::move(entry));
      }
    }
    cfg.target = j.value("target", std::string{});

    const DateProtocol def = DateProtocol::defaults();
    if (j.contains("dates")) {
      const json& d = j.at("dates");
      cfg.dates.pretrain = {parse_date_field(d, "pretrain_from", def.pretrain.from),
                            parse_date_field(d, "pretrain_to", def.pretrain.to)};
      cfg.dates.finetune = {parse_date_field(d, "finetune_from", def.finetune.from),
                            parse_date_field(d, "finetune_to", def.finetune.to)};
      cfg.dates.validate = {parse_date_field(d, "validate_from", def.validate.from),
                            parse_date_field(d, "validate_to", def.validate.to)};
      cfg.dates.test = {parse_date_field(d, "test_from", def.test.from),
                        parse_date_field(d, "test_to", def.test.to)};
    }

    cfg.lookback = j.value("lookback", 14);
    cfg.horizon = j.value("horizon", 7);

    if (j.contains("train")) {
      const json& t = j.at("train");
      cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
      cfg.train.epochs = t.value("epochs", cfg.train.epochs);
      cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
      cfg.train.seed = t.value("seed", cfg.train.seed);
      cfg.train.hidden_size = t.value("hidden_size", cfg.train.hidden_size);
      cfg.train.adam_beta1 = t.value("adam_beta1", cfg.train.adam_beta1);
      cfg.train.adam_beta2 = t.value("adam_beta2", cfg.train.adam_beta2);
      cfg.train.adam_epsilon = t.value("adam_epsilon", cfg.train.adam_epsilon);
      cfg.train.finetune_lr_multiplier =
          t.value("finetune_lr_multiplier", cfg.train.finetune_lr_multiplier);
      cfg.train.grad_clip_norm = t.value("grad_clip_norm", cfg.train.grad_clip_norm);
    }

    cfg.ensemble_mode = weight_mode_from_string(j.value("ensemble_mode", std::string{"literal"}));
    cfg.ensemble_aggregate = j.value("ensemble_aggregate", false);

    if (j.contains("seeds")) {
      cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } else {
      for (std::uint64_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
    }
    cfg.finetune_enabled = j.value("finetune_enabled", true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, origin_label + ": " + e.what());
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  json j;
  for (const CountryEntry& c : cfg.countries) {
    j["countries"].push_back(
        {{"name", c.name}, {"csv_path", c.csv_path}, {"population_density", c.population_density}});
  }
  j["target"] = cfg.target;
  j["dates"] = {{"pretrain_from", cfg.dates.pretrain.from.to_string()},
                {"pretrain_to", cfg.dates.pretrain.to.to_string()},
                {"finetune_from", cfg.dates.finetune.from.to_string()},
                {"finetune_to", cfg.dates.finetune.to.to_string()},
                {"validate_from", cfg.dates.validate.from.to_string()},
                {"validate_to", cfg.dates.validate.to.to_string()},
                {"test_from", cfg.dates.test.from.to_string()},
                {"test_to", cfg.dates.test.to.to_string()}};
  j["lookback"] = cfg.lookback;
  j["horizon"] = cfg.horizon;
  j["train"] = {{"learning_rate", cfg.train.learning_rate},
                {"epochs", cfg.train.epochs},
                {"batch_size", cfg.train.batch_size},
                {"seed", cfg.train.seed},
                {"hidden_size", cfg.train.hidden_size},
                {"adam_beta1", cfg.train.adam_beta1},
                {"adam_beta2", cfg.train.adam_beta2},
                {"adam_epsilon", cfg.train.adam_epsilon},
                {"finetune_lr_multiplier", cfg.train.finetune_lr_multiplier},
                {"grad_clip_norm", cfg.train.grad_clip_norm}};
  j["ensemble_mode"] = to_string(cfg.ensemble_mode);
  j["ensemble_aggregate"] = cfg.ensemble_aggregate;
  j["seeds"] = cfg.seeds;
  j["finetune_enabled"] = cfg.finetune_enabled;

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write config '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace epicast
