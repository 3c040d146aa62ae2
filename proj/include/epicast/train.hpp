#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epicast/gru.hpp"
#include "epicast/scaler.hpp"
#include "epicast/window.hpp"

namespace epicast {

struct TrainConfig {
  double learning_rate = 1e-2;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  int hidden_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double finetune_lr_multiplier = 0.5;
  double grad_clip_norm = 0.0;  // 0 disables clipping

  void validate() const;  // throws InvalidConfig
};

struct TrainHistory {
  std::vector<double> epoch_loss;  // mean training loss, one entry per epoch
};

// The trainable predictor: GRU weights plus the scaler that produced the
// training windows. Forecasting replays the same density/scale bookkeeping.
struct GruModel {
  GruParams params;
  FeatureScaler scaler;
  int lookback = 0;
  std::string provenance;
};

// Deterministic mini-batch training: a seeded shuffle per epoch, remainder
// batch included, within-batch gradients accumulated in index order. The
// returned model carries `scaler` and the dataset's lookback.
std::pair<GruModel, TrainHistory> train(const WindowedDataset& dataset, const TrainConfig& config,
                                        const FeatureScaler& scaler,
                                        const std::optional<GruParams>& initial = std::nullopt,
                                        std::string provenance = {});

}  // namespace epicast
