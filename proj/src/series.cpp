#include "epicast/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "epicast/errors.hpp"

namespace epicast {

namespace {

constexpr const char* kCsvHeader = "date,new_cases,new_deaths,active_cases";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& token, const std::string& context) {
  if (token.empty()) throw Error(ErrorCode::MalformedRow, "empty numeric field in " + context);
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::MalformedRow, "unparseable number '" + token + "' in " + context);
  }
  return value;
}

}  // namespace

FeatureMatrix CountrySeries::to_matrix() const {
  FeatureMatrix m(static_cast<Eigen::Index>(days.size()), kNumFeatures);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m.row(i) = days[static_cast<std::size_t>(i)].features().transpose();
  }
  return m;
}

CountrySeries make_country_series(std::string country_name, double population_density,
                                  std::vector<DayRecord> days) {
  if (population_density <= 0.0) {
    throw Error(ErrorCode::ZeroDensity,
                "population density must be > 0 for " + country_name);
  }
  if (days.size() < 2) {
    throw Error(ErrorCode::SeriesTooShort,
                country_name + " has " + std::to_string(days.size()) + " day(s); need >= 2");
  }
  for (std::size_t i = 0; i < days.size(); ++i) {
    const DayRecord& r = days[i];
    for (double v : {r.new_cases, r.new_deaths, r.active_cases}) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::MalformedRow,
                    "non-finite value on " + r.date.to_string() + " in " + country_name);
      }
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeValue,
                    "negative value on " + r.date.to_string() + " in " + country_name);
      }
    }
    if (i > 0) {
      const std::int64_t step = days[i].date - days[i - 1].date;
      if (step != 1) {
        throw Error(ErrorCode::MissingDate,
                    country_name + ": expected " + (days[i - 1].date + 1).to_string() +
                        " after " + days[i - 1].date.to_string() + ", found " +
                        days[i].date.to_string());
      }
    }
  }
  CountrySeries out;
  out.country_name = std::move(country_name);
  out.population_density = population_density;
  out.days = std::move(days);
  return out;
}

CountrySeries load_series(std::istream& in, const std::string& country_name,
                          double population_density, const std::string& origin_label) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::EmptyFile, origin_label + " is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw Error(ErrorCode::MalformedRow,
                origin_label + ": header must be '" + std::string(kCsvHeader) + "', got '" +
                    line + "'");
  }

  std::vector<DayRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate a trailing blank line
    const std::string context = origin_label + ":" + std::to_string(line_no);
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::MalformedRow,
                  context + ": expected 4 columns, got " + std::to_string(fields.size()));
    }
    const auto date = Date::try_parse(fields[0]);
    if (!date) throw Error(ErrorCode::MalformedRow, context + ": unparseable date '" + fields[0] + "'");
    DayRecord rec;
    rec.date = *date;
    rec.new_cases = parse_number(fields[1], context);
    rec.new_deaths = parse_number(fields[2], context);
    rec.active_cases = parse_number(fields[3], context);
    rows.push_back(rec);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyFile, origin_label + " has a header but no data rows");
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const DayRecord& a, const DayRecord& b) { return a.date < b.date; });
  return make_country_series(country_name, population_density, std::move(rows));
}

CountrySeries load_series(const std::string& path, const std::string& country_name,
                          double population_density) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return load_series(in, country_name, population_density, path);
}

void write_series_csv(const CountrySeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << kCsvHeader << "\n";
  char buf[96];
  for (const DayRecord& r : series.days) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", r.new_cases, r.new_deaths,
                  r.active_cases);
    out << r.date.to_string() << "," << buf << "\n";
  }
}

CountrySeries normalize_by_density(const CountrySeries& series) {
  if (series.population_density <= 0.0) {
    throw Error(ErrorCode::ZeroDensity,
                "population density must be > 0 for " + series.country_name);
  }
  CountrySeries out = series;
  const double inv = 1.0 / series.population_density;
  for (DayRecord& r : out.days) {
    r.new_cases *= inv;
    r.new_deaths *= inv;
    r.active_cases *= inv;
  }
  return out;
}

CountrySeries split_by_dates(const CountrySeries& series, Date from, Date to) {
  if (from > to) {
    throw Error(ErrorCode::OutOfRange,
                "empty range " + from.to_string() + ".." + to.to_string());
  }
  if (from < series.start_date() || to > series.end_date()) {
    throw Error(ErrorCode::OutOfRange,
                series.country_name + " covers " + series.start_date().to_string() + ".." +
                    series.end_date().to_string() + "; requested " + from.to_string() + ".." +
                    to.to_string());
  }
  const auto first = static_cast<std::size_t>(from - series.start_date());
  const auto count = static_cast<std::size_t>(to - from) + 1;
  CountrySeries out;
  out.country_name = series.country_name;
  out.population_density = series.population_density;
  out.days.assign(series.days.begin() + static_cast<std::ptrdiff_t>(first),
                  series.days.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

CountrySeries tail(const CountrySeries& series, std::size_t n) {
  if (n == 0 || n > series.size()) {
    throw Error(ErrorCode::OutOfRange,
                "tail of " + std::to_string(n) + " days from a series of " +
                    std::to_string(series.size()));
  }
  CountrySeries out;
  out.country_name = series.country_name;
  out.population_density = series.population_density;
  out.days.assign(series.days.end() - static_cast<std::ptrdiff_t>(n), series.days.end());
  return out;
}

}  // namespace epicast
