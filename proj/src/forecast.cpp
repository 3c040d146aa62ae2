#include "epicast/forecast.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "epicast/errors.hpp"

namespace epicast {

FeatureMatrix roll_forward(const OneStepFn& one_step, FeatureMatrix window, int horizon) {
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1, got " + std::to_string(horizon));
  }
  const Eigen::Index lookback = window.rows();
  FeatureMatrix predictions(horizon, kNumFeatures);
  for (int step = 0; step < horizon; ++step) {
    const FeatureVec next = one_step(window);
    if (!next.allFinite()) {
      throw Error(ErrorCode::NonFinitePrediction,
                  "non-finite prediction at recursive step " + std::to_string(step + 1));
    }
    predictions.row(step) = next.transpose();
    // slide: drop the oldest row, append the prediction
    window.topRows(lookback - 1) = window.bottomRows(lookback - 1).eval();
    window.row(lookback - 1) = next.transpose();
  }
  return predictions;
}

ForecastResult recursive_forecast_with(const OneStepFn& one_step, const FeatureScaler& scaler,
                                       int lookback, const CountrySeries& context, int horizon,
                                       const std::string& member_id, std::ostream* diagnostics) {
  if (static_cast<int>(context.size()) != lookback) {
    throw Error(ErrorCode::ContextLengthMismatch,
                "context has " + std::to_string(context.size()) + " days, model lookback is " +
                    std::to_string(lookback));
  }
  if (horizon > lookback && diagnostics != nullptr) {
    *diagnostics << "warning: horizon " << horizon << " exceeds look-back " << lookback
                 << "; the last " << (horizon - lookback)
                 << " step(s) condition on predicted rows only\n";
  }

  const CountrySeries normalized = normalize_by_density(context);
  const FeatureMatrix window = scaler.apply(normalized);
  const FeatureMatrix scaled = roll_forward(one_step, window, horizon);

  ForecastResult out;
  out.start_date = context.end_date() + 1;
  out.horizon = horizon;
  out.member_id = member_id;
  out.values = scaler.invert(scaled) * context.population_density;
  out.values = out.values.cwiseMax(0.0);  // counts cannot be negative
  return out;
}

ForecastResult recursive_forecast(const GruModel& model, const CountrySeries& context, int horizon,
                                  std::ostream* diagnostics) {
  const GruParams& params = model.params;
  OneStepFn step = [&params](const FeatureMatrix& window) {
    return forward_window(window, params);
  };
  return recursive_forecast_with(step, model.scaler, model.lookback, context, horizon,
                                 model.provenance, diagnostics);
}

ForecastResult persistence_baseline(const CountrySeries& context, int horizon) {
  if (context.size() == 0) {
    throw Error(ErrorCode::ContextLengthMismatch, "persistence baseline needs a non-empty context");
  }
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1, got " + std::to_string(horizon));
  }
  ForecastResult out;
  out.start_date = context.end_date() + 1;
  out.horizon = horizon;
  out.member_id = "persistence";
  out.values = FeatureMatrix(horizon, kNumFeatures);
  const FeatureVec last = context.days.back().features();
  for (int i = 0; i < horizon; ++i) out.values.row(i) = last.transpose();
  return out;
}

void append_forecast_csv(const ForecastResult& forecast, std::ostream& out, bool with_header) {
  if (with_header) out << "date,new_cases,new_deaths,active_cases,member_id\n";
  char buf[96];
  for (int i = 0; i < forecast.horizon; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", forecast.values(i, 0),
                  forecast.values(i, 1), forecast.values(i, 2));
    out << (forecast.start_date + i).to_string() << "," << buf << "," << forecast.member_id
        << "\n";
  }
}

void write_forecast_csv(const ForecastResult& forecast, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  append_forecast_csv(forecast, out, true);
}

ForecastResult read_forecast_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyFile, path + " is empty");

  std::vector<Date> dates;
  std::vector<FeatureVec> rows;
  std::string member_id;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string date_s, a, b, c, member;
    if (!std::getline(ss, date_s, ',') || !std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, c, ',') || !std::getline(ss, member)) {
      throw Error(ErrorCode::MalformedRow, path + ": bad forecast row '" + line + "'");
    }
    dates.push_back(Date::parse(date_s));
    rows.emplace_back(std::stod(a), std::stod(b), std::stod(c));
    member_id = member;
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, path + " has no forecast rows");

  ForecastResult out;
  out.start_date = dates.front();
  out.horizon = static_cast<int>(rows.size());
  out.member_id = member_id;
  out.values = FeatureMatrix(out.horizon, kNumFeatures);
  for (int i = 0; i < out.horizon; ++i) {
    if (dates[static_cast<std::size_t>(i)] - out.start_date != i) {
      throw Error(ErrorCode::DateMisalignment, path + ": forecast dates are not contiguous");
    }
    out.values.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  }
  return out;
}

}  // namespace epicast
