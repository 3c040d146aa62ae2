#pragma once

#include <Eigen/Dense>

#include "epicast/forecast.hpp"
#include "epicast/series.hpp"

namespace epicast {

// Relative error metrics. Both are SUMS over the d days, exactly as defined;
// pass normalized = true to divide by d for cross-horizon comparability.
//
//   rmse_relative = sum_i ((original_i - predicted_i) / original_i)^2
//   rmae_relative = sum_i |(original_i - predicted_i) / original_i|
//
// Every original_i must be nonzero; relative error is undefined at zero truth.
double rmse_relative(const Eigen::VectorXd& original, const Eigen::VectorXd& predicted,
                     bool normalized = false);
double rmae_relative(const Eigen::VectorXd& original, const Eigen::VectorXd& predicted,
                     bool normalized = false);

struct EvaluationReport {
  int horizon = 0;
  Eigen::Array3d rmse = Eigen::Array3d::Zero();
  Eigen::Array3d rmae = Eigen::Array3d::Zero();
  FeatureMatrix per_day_relative_error;  // signed (original - predicted) / original
};

// Per-variable relative errors of a forecast against the truth slice covering
// its dates.
EvaluationReport evaluate_forecast(const CountrySeries& truth, const ForecastResult& forecast,
                                   bool normalized = false);

}  // namespace epicast
