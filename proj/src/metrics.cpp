#include "epicast/metrics.hpp"

#include <cmath>
#include <string>

#include "epicast/errors.hpp"

namespace epicast {

namespace {

Eigen::VectorXd relative_errors(const Eigen::VectorXd& original,
                                const Eigen::VectorXd& predicted) {
  if (original.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "original has " + std::to_string(original.size()) + " days, predicted " +
                    std::to_string(predicted.size()));
  }
  if (original.size() == 0) {
    throw Error(ErrorCode::LengthMismatch, "empty series");
  }
  for (Eigen::Index i = 0; i < original.size(); ++i) {
    if (original[i] == 0.0) {
      throw Error(ErrorCode::ZeroOriginal,
                  "original value is zero on day " + std::to_string(i) +
                      "; relative error undefined");
    }
  }
  return ((original - predicted).array() / original.array()).matrix();
}

}  // namespace

double rmse_relative(const Eigen::VectorXd& original, const Eigen::VectorXd& predicted,
                     bool normalized) {
  const Eigen::VectorXd e = relative_errors(original, predicted);
  const double sum = e.squaredNorm();
  return normalized ? sum / static_cast<double>(e.size()) : sum;
}

double rmae_relative(const Eigen::VectorXd& original, const Eigen::VectorXd& predicted,
                     bool normalized) {
  const Eigen::VectorXd e = relative_errors(original, predicted);
  const double sum = e.array().abs().sum();
  return normalized ? sum / static_cast<double>(e.size()) : sum;
}

EvaluationReport evaluate_forecast(const CountrySeries& truth, const ForecastResult& forecast,
                                   bool normalized) {
  const Date last = forecast.start_date + (forecast.horizon - 1);
  if (forecast.start_date < truth.start_date() || last > truth.end_date()) {
    throw Error(ErrorCode::DateMisalignment,
                "truth covers " + truth.start_date().to_string() + ".." +
                    truth.end_date().to_string() + " but forecast spans " +
                    forecast.start_date.to_string() + ".." + last.to_string());
  }
  const CountrySeries slice = split_by_dates(truth, forecast.start_date, last);
  const FeatureMatrix actual = slice.to_matrix();

  EvaluationReport report;
  report.horizon = forecast.horizon;
  report.per_day_relative_error = FeatureMatrix(forecast.horizon, kNumFeatures);
  for (int f = 0; f < kNumFeatures; ++f) {
    const Eigen::VectorXd original = actual.col(f);
    const Eigen::VectorXd predicted = forecast.values.col(f);
    const Eigen::VectorXd e = relative_errors(original, predicted);
    report.per_day_relative_error.col(f) = e;
    const double d = normalized ? static_cast<double>(forecast.horizon) : 1.0;
    report.rmse[f] = e.squaredNorm() / d;
    report.rmae[f] = e.array().abs().sum() / d;
  }
  return report;
}

}  // namespace epicast
