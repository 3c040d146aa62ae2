#pragma once

#include <vector>

#include "epicast/series.hpp"

namespace epicast {

// Sliding-window training set: sample k pairs days k..k+L-1 with the value of
// day k+L as its one-step target. A series of length N yields N - L samples.
struct WindowedDataset {
  int lookback = 0;
  std::vector<FeatureMatrix> inputs;  // each L x 3
  std::vector<FeatureVec> targets;
  std::vector<Date> target_dates;

  std::size_t size() const { return inputs.size(); }
};

WindowedDataset make_windows(const FeatureMatrix& values, Date start_date, int lookback);
WindowedDataset make_windows(const CountrySeries& series, int lookback);

}  // namespace epicast
