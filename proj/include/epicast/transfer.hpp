#pragma once

#include <string>

#include "epicast/series.hpp"
#include "epicast/train.hpp"

namespace epicast {

struct TransferPlan {
  std::string source;
  DateRange pretrain_range;
  std::string target;
  DateRange finetune_range;
  bool finetune_enabled = true;

  // Both ranges must span more than `lookback` days or no window fits.
  void validate(int lookback) const;
};

// Pre-training pipeline: density-normalize, slice the range, fit the scaler
// on the slice, window with `lookback`, train from a fresh init. Provenance
// records the source country.
GruModel pretrain(const CountrySeries& source_series, const DateRange& range, int lookback,
                  const TrainConfig& config, TrainHistory* history = nullptr);

// Continued training of all parameters on the target slice at learning rate
// config.learning_rate * config.finetune_lr_multiplier. The scaler is refit
// on the target slice and used for all subsequent inference.
GruModel finetune(const GruModel& model, const CountrySeries& target_series,
                  const DateRange& range, const TrainConfig& config,
                  TrainHistory* history = nullptr);

// The no-transfer baseline: pretrain on the target itself, provenance
// "<target>-only".
GruModel train_target_only(const CountrySeries& target_series, const DateRange& range,
                           int lookback, const TrainConfig& config,
                           TrainHistory* history = nullptr);

}  // namespace epicast
