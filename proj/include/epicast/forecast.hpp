#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "epicast/scaler.hpp"
#include "epicast/series.hpp"
#include "epicast/train.hpp"

namespace epicast {

// H-day-ahead point forecast in denormalized counts (negatives clamped to 0).
struct ForecastResult {
  Date start_date;  // first forecast day
  int horizon = 0;
  FeatureMatrix values;  // horizon x 3
  std::string member_id;
};

// One-step predictor in scaled space: maps an L x 3 window to the next row.
using OneStepFn = std::function<FeatureVec(const FeatureMatrix&)>;

// Core recursion: apply `one_step` H times, each time appending the raw
// (unclamped) prediction to the window and dropping the oldest row, so the
// window keeps exactly L rows. Returns the H scaled predictions.
FeatureMatrix roll_forward(const OneStepFn& one_step, FeatureMatrix window, int horizon);

// Recursion plus bookkeeping: density-normalize and scale the context, roll
// forward, then unscale, density-denormalize and clamp the reported counts.
// Feedback always uses the unclamped scaled prediction. If horizon > lookback
// a diagnostic is emitted (late steps condition on predictions only) but the
// forecast still runs.
ForecastResult recursive_forecast_with(const OneStepFn& one_step, const FeatureScaler& scaler,
                                       int lookback, const CountrySeries& context, int horizon,
                                       const std::string& member_id,
                                       std::ostream* diagnostics = nullptr);

ForecastResult recursive_forecast(const GruModel& model, const CountrySeries& context, int horizon,
                                  std::ostream* diagnostics = nullptr);

// Repeats the last context row for every forecast day.
ForecastResult persistence_baseline(const CountrySeries& context, int horizon);

// Forecast CSV: header date,new_cases,new_deaths,active_cases,member_id.
void write_forecast_csv(const ForecastResult& forecast, const std::string& path);
void append_forecast_csv(const ForecastResult& forecast, std::ostream& out, bool with_header);
ForecastResult read_forecast_csv(const std::string& path);

}  // namespace epicast
