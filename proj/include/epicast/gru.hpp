#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "epicast/series.hpp"

namespace epicast {

// Parameters of a single-layer GRU plus a linear readout. The three gate
// blocks are the update gate, reset gate and candidate state; w_* act on the
// input, u_* on the recurrent state. The same struct doubles as the gradient
// bundle, since gradients share the shape family.
struct GruParams {
  int input_size = kNumFeatures;
  int hidden_size = 0;

  Eigen::MatrixXd w_update, u_update;
  Eigen::VectorXd b_update;
  Eigen::MatrixXd w_reset, u_reset;
  Eigen::VectorXd b_reset;
  Eigen::MatrixXd w_cand, u_cand;
  Eigen::VectorXd b_cand;
  Eigen::MatrixXd w_out;  // kNumFeatures x hidden
  Eigen::VectorXd b_out;  // kNumFeatures

  static GruParams zeros(int input_size, int hidden_size);

  std::size_t parameter_count() const;
  bool same_shape(const GruParams& other) const;
  bool all_finite() const;
};

// Weights uniform on [-1/sqrt(hidden), 1/sqrt(hidden)], biases zero,
// deterministic for a given seed.
GruParams init_params(int input_size, int hidden_size, std::uint64_t seed);

// One recurrence step:
//   z = sigmoid(W_z x + U_z h_prev + b_z)
//   r = sigmoid(W_r x + U_r h_prev + b_r)
//   c = tanh(W_c x + U_c (r . h_prev) + b_c)
//   h = (1 - z) . h_prev + z . c
Eigen::VectorXd cell_forward(const FeatureVec& x, const Eigen::VectorXd& h_prev,
                             const GruParams& params);

// Activations kept per step for backpropagation through time.
struct StepCache {
  Eigen::VectorXd h_prev;
  Eigen::VectorXd update;  // z
  Eigen::VectorXd reset;   // r
  Eigen::VectorXd cand;    // c
};

struct ForwardCache {
  std::vector<StepCache> steps;
  Eigen::VectorXd h_final;
  FeatureVec prediction;
};

// Runs the cell over the L window rows in date order from a zero state, then
// applies the readout: prediction = W_o h_L + b_o.
ForwardCache forward_window_cached(const FeatureMatrix& window, const GruParams& params);
FeatureVec forward_window(const FeatureMatrix& window, const GruParams& params);

// Mean of squared componentwise differences.
double loss_mse(const FeatureVec& prediction, const FeatureVec& target);

// Analytic gradients of loss_mse(forward_window(window), target) w.r.t. every
// parameter tensor.
GruParams backprop_window(const FeatureMatrix& window, const FeatureVec& target,
                          const GruParams& params);

// Deterministic row-major flattening (tensor order: update, reset, cand,
// readout; W, U, b within each gate). The optimizer and the serializer both
// rely on this order.
Eigen::VectorXd flatten(const GruParams& params);
GruParams unflatten(const Eigen::VectorXd& flat, int input_size, int hidden_size);

}  // namespace epicast
