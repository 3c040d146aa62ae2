#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "epicast/date.hpp"

namespace epicast {

inline constexpr int kNumFeatures = 3;

using FeatureVec = Eigen::Vector3d;
// One row per day: [new_cases, new_deaths, active_cases].
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

inline const char* feature_name(int f) {
  static const char* names[kNumFeatures] = {"new_cases", "new_deaths", "active_cases"};
  return names[f];
}

struct DayRecord {
  Date date;
  double new_cases = 0.0;
  double new_deaths = 0.0;
  double active_cases = 0.0;

  FeatureVec features() const { return {new_cases, new_deaths, active_cases}; }
};

// Daily multivariate series for one country. Dates are contiguous (exactly
// one record per calendar day), every value is finite and >= 0, length >= 2.
// Construct through make_country_series / load_series so the invariants hold.
struct CountrySeries {
  std::string country_name;
  double population_density = 0.0;  // persons per km^2
  std::vector<DayRecord> days;

  std::size_t size() const { return days.size(); }
  Date start_date() const { return days.front().date; }
  Date end_date() const { return days.back().date; }
  DateRange range() const { return {start_date(), end_date()}; }

  FeatureMatrix to_matrix() const;
};

// Validates the CountrySeries invariants; throws on violation.
CountrySeries make_country_series(std::string country_name, double population_density,
                                  std::vector<DayRecord> days);

// Reads a per-country CSV snapshot (header: date,new_cases,new_deaths,active_cases).
// Rows may arrive unsorted; they are sorted by date before validation.
CountrySeries load_series(const std::string& path, const std::string& country_name,
                          double population_density);
CountrySeries load_series(std::istream& in, const std::string& country_name,
                          double population_density, const std::string& origin_label = "<stream>");

void write_series_csv(const CountrySeries& series, const std::string& path);

// Divides every feature value by the series' population density.
CountrySeries normalize_by_density(const CountrySeries& series);

// Inclusive [from, to] sub-series.
CountrySeries split_by_dates(const CountrySeries& series, Date from, Date to);
inline CountrySeries split_by_dates(const CountrySeries& series, const DateRange& range) {
  return split_by_dates(series, range.from, range.to);
}

// Last n days.
CountrySeries tail(const CountrySeries& series, std::size_t n);

}  // namespace epicast
