#include "epicast/transfer.hpp"

#include <string>

#include "epicast/errors.hpp"

namespace epicast {

void TransferPlan::validate(int lookback) const {
  for (const auto& [label, range] : {std::pair<const char*, const DateRange&>{"pretrain", pretrain_range},
                                     {"finetune", finetune_range}}) {
    if (range.from > range.to) {
      throw Error(ErrorCode::OutOfRange, std::string(label) + " range is empty");
    }
    if (range.span_days() <= lookback) {
      throw Error(ErrorCode::SeriesTooShort,
                  std::string(label) + " range spans " + std::to_string(range.span_days()) +
                      " day(s); needs more than lookback " + std::to_string(lookback));
    }
  }
}

namespace {

GruModel train_on_slice(const CountrySeries& series, const DateRange& range, int lookback,
                        const TrainConfig& config, const std::optional<GruParams>& initial,
                        std::string provenance, TrainHistory* history) {
  const CountrySeries normalized = normalize_by_density(series);
  const CountrySeries slice = split_by_dates(normalized, range);
  const FeatureScaler scaler = FeatureScaler::fit(slice);
  const WindowedDataset windows = make_windows(scaler.apply(slice),
                                               slice.start_date(), lookback);
  auto [model, trace] = train(windows, config, scaler, initial, std::move(provenance));
  if (history) *history = std::move(trace);
  return std::move(model);
}

}  // namespace

GruModel pretrain(const CountrySeries& source_series, const DateRange& range, int lookback,
                  const TrainConfig& config, TrainHistory* history) {
  return train_on_slice(source_series, range, lookback, config, std::nullopt,
                        source_series.country_name, history);
}

GruModel finetune(const GruModel& model, const CountrySeries& target_series,
                  const DateRange& range, const TrainConfig& config, TrainHistory* history) {
  config.validate();
  TrainConfig tuned = config;
  tuned.learning_rate = config.learning_rate * config.finetune_lr_multiplier;
  tuned.hidden_size = model.params.hidden_size;
  return train_on_slice(target_series, range, model.lookback, tuned, model.params,
                        model.provenance + "→fine-tuned:" + target_series.country_name,
                        history);
}

GruModel train_target_only(const CountrySeries& target_series, const DateRange& range,
                           int lookback, const TrainConfig& config, TrainHistory* history) {
  GruModel model = pretrain(target_series, range, lookback, config, history);
  model.provenance = target_series.country_name + "-only";
  return model;
}

}  // namespace epicast
