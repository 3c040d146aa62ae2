#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace epicast {

// Calendar date, stored as days since 1970-01-01 (proleptic Gregorian).
// Arithmetic is plain day counting; no time zones, no times of day.
class Date {
public:
  Date() = default;

  static Date from_days(std::int64_t days);
  static Date from_ymd(int year, int month, int day);  // throws MalformedRow on invalid dates
  static std::optional<Date> try_parse(const std::string& iso);  // "YYYY-MM-DD"
  static Date parse(const std::string& iso);                     // throws MalformedRow

  std::int64_t days_since_epoch() const { return days_; }
  void to_ymd(int& year, int& month, int& day) const;
  std::string to_string() const;  // ISO-8601

  auto operator<=>(const Date&) const = default;

  Date operator+(int days) const { return from_days(days_ + days); }
  Date operator-(int days) const { return from_days(days_ - days); }
  Date& operator++() { ++days_; return *this; }

  // Number of days from other to *this.
  std::int64_t operator-(const Date& other) const { return days_ - other.days_; }

private:
  std::int64_t days_ = 0;
};

struct DateRange {
  Date from;
  Date to;

  // Inclusive day count.
  std::int64_t span_days() const { return to - from + 1; }
  bool contains(Date d) const { return from <= d && d <= to; }
};

}  // namespace epicast
