#include "depositlag/date.h"

#include <charconv>
#include <cstdio>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

namespace chr = std::chrono;

chr::sys_days to_sys_days(const CalendarDate& d) {
  return chr::sys_days{chr::year{d.year()} / chr::month{static_cast<unsigned>(d.month())} /
                       chr::day{static_cast<unsigned>(d.day())}};
}

bool parse_fixed_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

CalendarDate::CalendarDate(int year, int month, int day) : year_(year), month_(month), day_(day) {
  if (!is_valid(year, month, day)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d-%d-%d", year, month, day);
    throw RecordRejected(RejectReason::kInvalidDate, buf);
  }
}

bool CalendarDate::is_valid(int year, int month, int day) noexcept {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 || day > 31) return false;
  return chr::year_month_day{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                             chr::day{static_cast<unsigned>(day)}}
      .ok();
}

CalendarDate CalendarDate::parse_iso(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ' || text[10] == 't')) {
    text = text.substr(0, 10);
  }
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
      !parse_fixed_int(text.substr(8, 2), d)) {
    throw RecordRejected(RejectReason::kInvalidDate, "not an ISO date: '" + std::string(text) + "'");
  }
  return CalendarDate(y, m, d);
}

CalendarDate CalendarDate::from_serial(std::int64_t days_since_epoch) {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days_since_epoch}}};
  return CalendarDate(static_cast<int>(ymd.year()), static_cast<int>(unsigned(ymd.month())),
                      static_cast<int>(unsigned(ymd.day())));
}

std::int64_t CalendarDate::serial() const noexcept {
  return to_sys_days(*this).time_since_epoch().count();
}

CalendarDate CalendarDate::plus_days(std::int64_t days) const {
  return from_serial(serial() + days);
}

std::string CalendarDate::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year_, month_, day_);
  return buf;
}

std::int64_t date_diff_days(const CalendarDate& a, const CalendarDate& b) noexcept {
  return b.serial() - a.serial();
}

}  // namespace depositlag
