#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epicast/date.hpp"
#include "epicast/ensemble.hpp"
#include "epicast/train.hpp"

namespace epicast {

struct CountryEntry {
  std::string name;
  std::string csv_path;
  double population_density = 0.0;
};

struct DateProtocol {
  DateRange pretrain;
  DateRange finetune;
  DateRange validate;
  DateRange test;

  // The published protocol: pre-train 2020-02-15..2021-04-16, fine-tune
  // 2021-01-01..2021-03-31, validate 2021-04-01..2021-04-15, test
  // 2021-04-16..2021-06-04.
  static DateProtocol defaults();
};

struct ExperimentConfig {
  std::vector<CountryEntry> countries;  // sources plus the target
  std::string target;
  DateProtocol dates = DateProtocol::defaults();
  int lookback = 14;
  int horizon = 7;
  TrainConfig train;
  WeightMode ensemble_mode = WeightMode::literal;
  bool ensemble_aggregate = false;
  std::vector<std::uint64_t> seeds;  // defaults to 0..19
  bool finetune_enabled = true;

  void validate() const;  // throws InvalidConfig
  const CountryEntry& target_entry() const;
  std::vector<CountryEntry> source_entries() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text, const std::string& origin_label);
void save_config(const ExperimentConfig& config, const std::string& path);

}  // namespace epicast
