#include "epicast/adam.hpp"

#include <cmath>
#include <string>

#include "epicast/errors.hpp"

namespace epicast {

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& gradient, AdamState& state,
               const AdamConfig& config, std::int64_t step_index) {
  if (step_index < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "adam step index counts from 1, got " + std::to_string(step_index));
  }
  if (gradient.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam buffers disagree on parameter count");
  }
  state.m = config.beta1 * state.m + (1.0 - config.beta1) * gradient;
  state.v = config.beta2 * state.v.array().matrix() +
            (1.0 - config.beta2) * gradient.array().square().matrix();
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step_index));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step_index));
  const Eigen::ArrayXd m_hat = state.m.array() / bc1;
  const Eigen::ArrayXd v_hat = state.v.array() / bc2;
  params.array() -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
}

}  // namespace epicast
