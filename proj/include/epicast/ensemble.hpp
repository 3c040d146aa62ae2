#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "epicast/forecast.hpp"

namespace epicast {

// How validation RMSE turns into member weights.
//   literal: w_i = RMSE_i / sum_j RMSE_j  (larger error, larger weight)
//   inverse: w_i = (1/RMSE_i) / sum_j (1/RMSE_j)
// The literal form is the default; inverse is the conventional alternative.
enum class WeightMode { literal, inverse };

const char* to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& name);

struct ValidationScore {
  std::string member_id;
  Eigen::Array3d rmse = Eigen::Array3d::Zero();  // strictly positive, per variable
};

struct EnsembleSpec {
  std::vector<std::string> member_ids;
  Eigen::MatrixX3d weights;  // n members x 3 variables; each column sums to 1
  WeightMode mode = WeightMode::literal;
};

// Weights per variable from validation scores. With aggregate = true the mean
// of the three per-variable RMSEs drives a single weight per member, repeated
// across variables.
EnsembleSpec compute_weights(const std::vector<ValidationScore>& scores, WeightMode mode,
                             bool aggregate = false);

// Weighted combination per date and variable. Member forecasts must share
// start_date and horizon and appear in spec order. The combined value is
// clamped into the member min/max envelope, so convexity survives rounding.
ForecastResult combine(const std::vector<ForecastResult>& forecasts, const EnsembleSpec& spec);

// All non-empty subsets in size-then-lexicographic order (index order of the
// input list).
std::vector<std::vector<std::string>> enumerate_combinations(
    const std::vector<std::string>& member_ids);

std::string combination_label(const std::vector<std::string>& member_ids);

}  // namespace epicast
