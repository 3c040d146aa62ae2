#include "epicast/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "epicast/errors.hpp"

namespace epicast {

const char* to_string(WeightMode mode) {
  return mode == WeightMode::literal ? "literal" : "inverse";
}

WeightMode weight_mode_from_string(const std::string& name) {
  if (name == "literal") return WeightMode::literal;
  if (name == "inverse") return WeightMode::inverse;
  throw Error(ErrorCode::InvalidConfig, "unknown weight mode '" + name + "'");
}

EnsembleSpec compute_weights(const std::vector<ValidationScore>& scores, WeightMode mode,
                             bool aggregate) {
  if (scores.empty()) {
    throw Error(ErrorCode::EmptyMemberList, "cannot weight an empty member list");
  }
  const auto n = static_cast<Eigen::Index>(scores.size());
  Eigen::MatrixX3d basis(n, kNumFeatures);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ValidationScore& s = scores[static_cast<std::size_t>(i)];
    for (int f = 0; f < kNumFeatures; ++f) {
      const double rmse = aggregate ? s.rmse.mean() : s.rmse[f];
      if (!(rmse > 0.0) || !std::isfinite(rmse)) {
        throw Error(ErrorCode::ZeroRmse,
                    "validation RMSE for '" + s.member_id + "' must be finite and > 0");
      }
      basis(i, f) = mode == WeightMode::literal ? rmse : 1.0 / rmse;
    }
  }

  EnsembleSpec spec;
  spec.mode = mode;
  spec.member_ids.reserve(scores.size());
  for (const ValidationScore& s : scores) spec.member_ids.push_back(s.member_id);
  spec.weights = Eigen::MatrixX3d(n, kNumFeatures);
  for (int f = 0; f < kNumFeatures; ++f) {
    spec.weights.col(f) = basis.col(f) / basis.col(f).sum();
  }
  return spec;
}

ForecastResult combine(const std::vector<ForecastResult>& forecasts, const EnsembleSpec& spec) {
  if (forecasts.empty() || spec.member_ids.empty()) {
    throw Error(ErrorCode::EmptyMemberList, "cannot combine zero forecasts");
  }
  if (forecasts.size() != spec.member_ids.size()) {
    throw Error(ErrorCode::MemberMismatch,
                std::to_string(forecasts.size()) + " forecasts for " +
                    std::to_string(spec.member_ids.size()) + " weighted members");
  }
  const ForecastResult& first = forecasts.front();
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const ForecastResult& f = forecasts[i];
    if (f.member_id != spec.member_ids[i]) {
      throw Error(ErrorCode::MemberMismatch,
                  "forecast " + std::to_string(i) + " is '" + f.member_id + "', spec expects '" +
                      spec.member_ids[i] + "'");
    }
    if (f.start_date != first.start_date || f.horizon != first.horizon) {
      throw Error(ErrorCode::DateMisalignment,
                  "member '" + f.member_id + "' spans " + f.start_date.to_string() + "+" +
                      std::to_string(f.horizon) + ", expected " + first.start_date.to_string() +
                      "+" + std::to_string(first.horizon));
    }
  }

  ForecastResult out;
  out.start_date = first.start_date;
  out.horizon = first.horizon;
  out.member_id = "ensemble(" + combination_label(spec.member_ids) + ")";
  out.values = FeatureMatrix::Zero(first.horizon, kNumFeatures);
  for (int day = 0; day < first.horizon; ++day) {
    for (int f = 0; f < kNumFeatures; ++f) {
      double sum = 0.0;
      double lo = forecasts.front().values(day, f);
      double hi = lo;
      for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const double v = forecasts[i].values(day, f);
        sum += spec.weights(static_cast<Eigen::Index>(i), f) * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      out.values(day, f) = std::clamp(sum, lo, hi);
    }
  }
  return out;
}

std::vector<std::vector<std::string>> enumerate_combinations(
    const std::vector<std::string>& member_ids) {
  const std::size_t n = member_ids.size();
  if (n < 1 || n > 8) {
    throw Error(ErrorCode::InvalidConfig,
                "combination enumeration supports 1..8 members, got " + std::to_string(n));
  }
  std::vector<std::vector<std::string>> subsets;
  subsets.reserve((std::size_t{1} << n) - 1);
  // masks grouped by popcount; within a group, lexicographic index order
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> picks(size);
    for (std::size_t i = 0; i < size; ++i) picks[i] = i;
    while (true) {
      std::vector<std::string> subset;
      subset.reserve(size);
      for (std::size_t p : picks) subset.push_back(member_ids[p]);
      subsets.push_back(std::move(subset));

      // next combination of indices
      std::size_t k = size;
      while (k > 0 && picks[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++picks[k - 1];
      for (std::size_t j = k; j < size; ++j) picks[j] = picks[j - 1] + 1;
    }
  }
  return subsets;
}

std::string combination_label(const std::vector<std::string>& member_ids) {
  std::string label;
  for (std::size_t i = 0; i < member_ids.size(); ++i) {
    if (i > 0) label += ",";
    label += member_ids[i];
  }
  return label;
}

}  // namespace epicast
