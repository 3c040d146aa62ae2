#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace epicast {

struct AdamConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment EMAs, zero-initialised.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;

  static AdamState zeros(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
};

// Standard bias-corrected update, step_index counts from 1:
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   theta <- theta - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& gradient, AdamState& state,
               const AdamConfig& config, std::int64_t step_index);

}  // namespace epicast
