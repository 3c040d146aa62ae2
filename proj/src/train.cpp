#include "epicast/train.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "epicast/adam.hpp"
#include "epicast/errors.hpp"

namespace epicast {

namespace {

// Fisher-Yates with raw engine draws; std::shuffle's permutation is
// implementation-defined, this one is not.
void deterministic_shuffle(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (hidden_size < 1) fail("hidden_size must be >= 1");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) fail("adam_beta1 must lie in (0,1)");
  if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) fail("adam_beta2 must lie in (0,1)");
  if (!(adam_epsilon > 0.0)) fail("adam_epsilon must be > 0");
  if (!(finetune_lr_multiplier > 0.0)) fail("finetune_lr_multiplier must be > 0");
  if (grad_clip_norm < 0.0) fail("grad_clip_norm must be >= 0");
}

std::pair<GruModel, TrainHistory> train(const WindowedDataset& dataset, const TrainConfig& config,
                                        const FeatureScaler& scaler,
                                        const std::optional<GruParams>& initial,
                                        std::string provenance) {
  config.validate();
  if (dataset.size() == 0) {
    throw Error(ErrorCode::EmptyDataset, "cannot train on an empty dataset");
  }

  GruParams params = initial ? *initial : init_params(kNumFeatures, config.hidden_size, config.seed);
  if (initial && !initial->all_finite()) {
    throw Error(ErrorCode::ShapeMismatch, "initial parameters contain non-finite entries");
  }

  Eigen::VectorXd flat = flatten(params);
  AdamState adam = AdamState::zeros(flat.size());
  const AdamConfig adam_cfg{config.learning_rate, config.adam_beta1, config.adam_beta2,
                            config.adam_epsilon};

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainHistory history;
  history.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));
  std::int64_t step = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    double epoch_loss_sum = 0.0;

    for (std::size_t batch_start = 0; batch_start < order.size();
         batch_start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t batch_end =
          std::min(order.size(), batch_start + static_cast<std::size_t>(config.batch_size));
      const double batch_count = static_cast<double>(batch_end - batch_start);

      params = unflatten(flat, kNumFeatures, config.hidden_size);
      Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(flat.size());
      for (std::size_t k = batch_start; k < batch_end; ++k) {
        const std::size_t sample = order[k];
        const ForwardCache cache = forward_window_cached(dataset.inputs[sample], params);
        const double sample_loss = loss_mse(cache.prediction, dataset.targets[sample]);
        if (!std::isfinite(sample_loss)) {
          throw Error(ErrorCode::DivergedLoss,
                      "non-finite loss at epoch " + std::to_string(epoch) + ", sample " +
                          std::to_string(sample));
        }
        epoch_loss_sum += sample_loss;
        grad_sum += flatten(backprop_window(dataset.inputs[sample], dataset.targets[sample], params));
      }

      Eigen::VectorXd grad = grad_sum / batch_count;
      if (config.grad_clip_norm > 0.0) {
        const double norm = grad.norm();
        if (norm > config.grad_clip_norm) grad *= config.grad_clip_norm / norm;
      }
      adam_step(flat, grad, adam, adam_cfg, ++step);
    }

    history.epoch_loss.push_back(epoch_loss_sum / static_cast<double>(dataset.size()));
  }

  GruModel model;
  model.params = unflatten(flat, kNumFeatures, config.hidden_size);
  if (!model.params.all_finite()) {
    throw Error(ErrorCode::DivergedLoss, "training produced non-finite parameters");
  }
  model.scaler = scaler;
  model.lookback = dataset.lookback;
  model.provenance = std::move(provenance);
  return {std::move(model), std::move(history)};
}

}  // namespace epicast
