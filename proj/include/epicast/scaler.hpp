#pragma once

#include <Eigen/Dense>

#include "epicast/series.hpp"

namespace epicast {

// Per-feature min-max scaler. apply() maps the fit range onto [0,1]; inputs
// outside the fit range extrapolate linearly. invert(apply(x)) == x to within
// 1e-12 relative error.
class FeatureScaler {
public:
  FeatureScaler() = default;
  FeatureScaler(const Eigen::Array3d& feature_min, const Eigen::Array3d& feature_max);

  static FeatureScaler fit(const FeatureMatrix& values);
  static FeatureScaler fit(const CountrySeries& series) { return fit(series.to_matrix()); }

  FeatureVec apply(const FeatureVec& x) const;
  FeatureVec invert(const FeatureVec& scaled) const;
  FeatureMatrix apply(const FeatureMatrix& values) const;
  FeatureMatrix invert(const FeatureMatrix& scaled) const;
  FeatureMatrix apply(const CountrySeries& series) const { return apply(series.to_matrix()); }

  const Eigen::Array3d& feature_min() const { return min_; }
  const Eigen::Array3d& feature_max() const { return max_; }

private:
  Eigen::Array3d min_ = Eigen::Array3d::Zero();
  Eigen::Array3d max_ = Eigen::Array3d::Ones();
};

inline FeatureScaler fit_scaler(const CountrySeries& series) { return FeatureScaler::fit(series); }

}  // namespace epicast
