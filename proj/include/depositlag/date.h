#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace depositlag {

// A timezone-free Gregorian calendar date. Construction validates.
class CalendarDate {
 public:
  // 1970-01-01.
  CalendarDate() noexcept : year_(1970), month_(1), day_(1) {}
  // Throws RecordRejected(kInvalidDate) for impossible dates.
  CalendarDate(int year, int month, int day);

  static bool is_valid(int year, int month, int day) noexcept;

  // Accepts "YYYY-MM-DD" optionally followed by a time component
  // ("T..." or " ..."), which is discarded.
  static CalendarDate parse_iso(std::string_view text);

  static CalendarDate from_serial(std::int64_t days_since_epoch);

  int year() const noexcept { return year_; }
  int month() const noexcept { return month_; }
  int day() const noexcept { return day_; }

  // Days since 1970-01-01.
  std::int64_t serial() const noexcept;

  CalendarDate plus_days(std::int64_t days) const;
  CalendarDate next() const { return plus_days(1); }

  std::string iso() const;

  friend auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
  friend bool operator==(const CalendarDate&, const CalendarDate&) = default;

 private:
  int year_;
  int month_;
  int day_;
};

// b - a in whole days; negative when b precedes a.
std::int64_t date_diff_days(const CalendarDate& a, const CalendarDate& b) noexcept;

}  // namespace depositlag
