#include "epicast/gru.hpp"

#include <cmath>
#include <random>
#include <string>

#include "epicast/errors.hpp"

namespace epicast {

namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& a) { return 1.0 / (1.0 + (-a).exp()); }

void check_sizes(int input_size, int hidden_size) {
  if (input_size < 1 || hidden_size < 1) {
    throw Error(ErrorCode::ShapeMismatch,
                "sizes must be >= 1, got input " + std::to_string(input_size) + ", hidden " +
                    std::to_string(hidden_size));
  }
}

}  // namespace

GruParams GruParams::zeros(int input_size, int hidden_size) {
  check_sizes(input_size, hidden_size);
  GruParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  p.w_update = Eigen::MatrixXd::Zero(hidden_size, input_size);
  p.u_update = Eigen::MatrixXd::Zero(hidden_size, hidden_size);
  p.b_update = Eigen::VectorXd::Zero(hidden_size);
  p.w_reset = p.w_update;
  p.u_reset = p.u_update;
  p.b_reset = p.b_update;
  p.w_cand = p.w_update;
  p.u_cand = p.u_update;
  p.b_cand = p.b_update;
  p.w_out = Eigen::MatrixXd::Zero(kNumFeatures, hidden_size);
  p.b_out = Eigen::VectorXd::Zero(kNumFeatures);
  return p;
}

std::size_t GruParams::parameter_count() const {
  const std::size_t h = static_cast<std::size_t>(hidden_size);
  const std::size_t in = static_cast<std::size_t>(input_size);
  return 3 * (h * in + h * h + h) + static_cast<std::size_t>(kNumFeatures) * h +
         static_cast<std::size_t>(kNumFeatures);
}

bool GruParams::same_shape(const GruParams& other) const {
  return input_size == other.input_size && hidden_size == other.hidden_size;
}

bool GruParams::all_finite() const {
  for (const Eigen::MatrixXd* m : {&w_update, &u_update, &w_reset, &u_reset, &w_cand, &u_cand,
                                   &w_out}) {
    if (!m->allFinite()) return false;
  }
  for (const Eigen::VectorXd* v : {&b_update, &b_reset, &b_cand, &b_out}) {
    if (!v->allFinite()) return false;
  }
  return true;
}

GruParams init_params(int input_size, int hidden_size, std::uint64_t seed) {
  check_sizes(input_size, hidden_size);
  GruParams p = GruParams::zeros(input_size, hidden_size);
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  std::mt19937_64 rng(seed);
  // Hand-rolled uniform draw so the stream does not depend on the standard
  // library's distribution implementation.
  auto uniform = [&rng, k]() {
    const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    return (2.0 * u01 - 1.0) * k;
  };
  auto fill = [&uniform](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = uniform();
    }
  };
  fill(p.w_update);
  fill(p.u_update);
  fill(p.w_reset);
  fill(p.u_reset);
  fill(p.w_cand);
  fill(p.u_cand);
  fill(p.w_out);
  // biases stay zero
  return p;
}

Eigen::VectorXd cell_forward(const FeatureVec& x, const Eigen::VectorXd& h_prev,
                             const GruParams& p) {
  const Eigen::ArrayXd z = sigmoid((p.w_update * x + p.u_update * h_prev + p.b_update).array());
  const Eigen::ArrayXd r = sigmoid((p.w_reset * x + p.u_reset * h_prev + p.b_reset).array());
  const Eigen::ArrayXd c =
      ((p.w_cand * x + p.u_cand * (r * h_prev.array()).matrix() + p.b_cand).array()).tanh();
  return ((1.0 - z) * h_prev.array() + z * c).matrix();
}

ForwardCache forward_window_cached(const FeatureMatrix& window, const GruParams& p) {
  if (window.rows() < 1) {
    throw Error(ErrorCode::ShapeMismatch, "window must have >= 1 row");
  }
  ForwardCache cache;
  cache.steps.reserve(static_cast<std::size_t>(window.rows()));
  Eigen::VectorXd h = Eigen::VectorXd::Zero(p.hidden_size);
  for (Eigen::Index t = 0; t < window.rows(); ++t) {
    const FeatureVec x = window.row(t).transpose();
    StepCache step;
    step.h_prev = h;
    step.update = sigmoid((p.w_update * x + p.u_update * h + p.b_update).array()).matrix();
    step.reset = sigmoid((p.w_reset * x + p.u_reset * h + p.b_reset).array()).matrix();
    step.cand = ((p.w_cand * x + p.u_cand * (step.reset.array() * h.array()).matrix() + p.b_cand)
                     .array())
                    .tanh()
                    .matrix();
    h = ((1.0 - step.update.array()) * h.array() + step.update.array() * step.cand.array())
            .matrix();
    cache.steps.push_back(std::move(step));
  }
  cache.h_final = h;
  cache.prediction = p.w_out * h + p.b_out;
  return cache;
}

FeatureVec forward_window(const FeatureMatrix& window, const GruParams& p) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(p.hidden_size);
  for (Eigen::Index t = 0; t < window.rows(); ++t) {
    h = cell_forward(window.row(t).transpose(), h, p);
  }
  return p.w_out * h + p.b_out;
}

double loss_mse(const FeatureVec& prediction, const FeatureVec& target) {
  return (prediction - target).squaredNorm() / static_cast<double>(kNumFeatures);
}

GruParams backprop_window(const FeatureMatrix& window, const FeatureVec& target,
                          const GruParams& p) {
  const ForwardCache cache = forward_window_cached(window, p);
  GruParams g = GruParams::zeros(p.input_size, p.hidden_size);

  // Readout: L = mean((pred - target)^2), d L / d pred = (2/3)(pred - target).
  const FeatureVec d_pred =
      (2.0 / static_cast<double>(kNumFeatures)) * (cache.prediction - target);
  g.w_out = d_pred * cache.h_final.transpose();
  g.b_out = d_pred;

  Eigen::VectorXd dh = p.w_out.transpose() * d_pred;

  for (Eigen::Index t = window.rows() - 1; t >= 0; --t) {
    const StepCache& s = cache.steps[static_cast<std::size_t>(t)];
    const FeatureVec x = window.row(t).transpose();
    const Eigen::ArrayXd z = s.update.array();
    const Eigen::ArrayXd r = s.reset.array();
    const Eigen::ArrayXd c = s.cand.array();
    const Eigen::ArrayXd hp = s.h_prev.array();
    const Eigen::ArrayXd dh_a = dh.array();

    // h = (1 - z) . h_prev + z . c
    const Eigen::ArrayXd d_cand_pre = dh_a * z * (1.0 - c.square());        // through tanh
    const Eigen::ArrayXd d_update_pre = dh_a * (c - hp) * z * (1.0 - z);    // through sigmoid

    const Eigen::VectorXd d_cand = d_cand_pre.matrix();
    const Eigen::VectorXd d_update = d_update_pre.matrix();

    g.w_cand.noalias() += d_cand * x.transpose();
    g.u_cand.noalias() += d_cand * (r * hp).matrix().transpose();
    g.b_cand += d_cand;

    // candidate pre-activation feeds r . h_prev through u_cand
    const Eigen::ArrayXd d_rh = (p.u_cand.transpose() * d_cand).array();
    const Eigen::ArrayXd d_reset_pre = d_rh * hp * r * (1.0 - r);
    const Eigen::VectorXd d_reset = d_reset_pre.matrix();

    g.w_reset.noalias() += d_reset * x.transpose();
    g.u_reset.noalias() += d_reset * s.h_prev.transpose();
    g.b_reset += d_reset;

    g.w_update.noalias() += d_update * x.transpose();
    g.u_update.noalias() += d_update * s.h_prev.transpose();
    g.b_update += d_update;

    dh = ((dh_a * (1.0 - z) + d_rh * r).matrix() + p.u_reset.transpose() * d_reset +
          p.u_update.transpose() * d_update);
  }
  return g;
}

Eigen::VectorXd flatten(const GruParams& p) {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(p.parameter_count()));
  Eigen::Index pos = 0;
  auto put_matrix = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat[pos++] = m(r, c);
    }
  };
  auto put_vector = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) flat[pos++] = v[i];
  };
  put_matrix(p.w_update);
  put_matrix(p.u_update);
  put_vector(p.b_update);
  put_matrix(p.w_reset);
  put_matrix(p.u_reset);
  put_vector(p.b_reset);
  put_matrix(p.w_cand);
  put_matrix(p.u_cand);
  put_vector(p.b_cand);
  put_matrix(p.w_out);
  put_vector(p.b_out);
  return flat;
}

GruParams unflatten(const Eigen::VectorXd& flat, int input_size, int hidden_size) {
  GruParams p = GruParams::zeros(input_size, hidden_size);
  if (flat.size() != static_cast<Eigen::Index>(p.parameter_count())) {
    throw Error(ErrorCode::ShapeMismatch,
                "flat vector has " + std::to_string(flat.size()) + " entries, expected " +
                    std::to_string(p.parameter_count()));
  }
  Eigen::Index pos = 0;
  auto take_matrix = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[pos++];
    }
  };
  auto take_vector = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = flat[pos++];
  };
  take_matrix(p.w_update);
  take_matrix(p.u_update);
  take_vector(p.b_update);
  take_matrix(p.w_reset);
  take_matrix(p.u_reset);
  take_vector(p.b_reset);
  take_matrix(p.w_cand);
  take_matrix(p.u_cand);
  take_vector(p.b_cand);
  take_matrix(p.w_out);
  take_vector(p.b_out);
  return p;
}

}  // namespace epicast
