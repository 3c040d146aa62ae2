#include "epicast/window.hpp"

#include <string>

#include "epicast/errors.hpp"

namespace epicast {

WindowedDataset make_windows(const FeatureMatrix& values, Date start_date, int lookback) {
  if (lookback < 1) {
    throw Error(ErrorCode::InvalidConfig, "lookback must be >= 1, got " + std::to_string(lookback));
  }
  const Eigen::Index n = values.rows();
  if (n <= lookback) {
    throw Error(ErrorCode::SeriesTooShort,
                "need > " + std::to_string(lookback) + " days for lookback " +
                    std::to_string(lookback) + ", got " + std::to_string(n));
  }
  WindowedDataset out;
  out.lookback = lookback;
  const Eigen::Index samples = n - lookback;
  out.inputs.reserve(static_cast<std::size_t>(samples));
  out.targets.reserve(static_cast<std::size_t>(samples));
  out.target_dates.reserve(static_cast<std::size_t>(samples));
  for (Eigen::Index k = 0; k < samples; ++k) {
    out.inputs.push_back(values.middleRows(k, lookback));
    out.targets.push_back(values.row(k + lookback).transpose());
    out.target_dates.push_back(start_date + static_cast<int>(k + lookback));
  }
  return out;
}

WindowedDataset make_windows(const CountrySeries& series, int lookback) {
  return make_windows(series.to_matrix(), series.start_date(), lookback);
}

}  // namespace epicast
