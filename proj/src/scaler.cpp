#include "epicast/scaler.hpp"

#include <string>

#include "epicast/errors.hpp"

namespace epicast {

FeatureScaler::FeatureScaler(const Eigen::Array3d& feature_min, const Eigen::Array3d& feature_max)
    : min_(feature_min), max_(feature_max) {
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!(max_[f] > min_[f])) {
      throw Error(ErrorCode::ConstantFeature,
                  std::string(feature_name(f)) + " has max <= min (" + std::to_string(max_[f]) +
                      " <= " + std::to_string(min_[f]) + ")");
    }
  }
}

FeatureScaler FeatureScaler::fit(const FeatureMatrix& values) {
  if (values.rows() < 2) {
    throw Error(ErrorCode::SeriesTooShort,
                "scaler needs >= 2 rows, got " + std::to_string(values.rows()));
  }
  Eigen::Array3d lo = values.colwise().minCoeff().transpose().array();
  Eigen::Array3d hi = values.colwise().maxCoeff().transpose().array();
  return FeatureScaler(lo, hi);  // ctor rejects constant features
}

FeatureVec FeatureScaler::apply(const FeatureVec& x) const {
  return ((x.array() - min_) / (max_ - min_)).matrix();
}

FeatureVec FeatureScaler::invert(const FeatureVec& scaled) const {
  return (scaled.array() * (max_ - min_) + min_).matrix();
}

FeatureMatrix FeatureScaler::apply(const FeatureMatrix& values) const {
  FeatureMatrix out(values.rows(), kNumFeatures);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out.row(i) = apply(FeatureVec(values.row(i))).transpose();
  }
  return out;
}

FeatureMatrix FeatureScaler::invert(const FeatureMatrix& scaled) const {
  FeatureMatrix out(scaled.rows(), kNumFeatures);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
    out.row(i) = invert(FeatureVec(scaled.row(i))).transpose();
  }
  return out;
}

}  // namespace epicast
