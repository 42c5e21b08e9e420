#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "quakeb/error.hpp"
#include "quakeb/util.hpp"

namespace quakeb {

/// UTC instant at minute resolution. Catalog files carry no seconds.
using TimePoint = std::chrono::sys_time<std::chrono::minutes>;

struct CivilTime {
  int year;
  int month;
  int day;
  int hour;
  int minute;
};

inline TimePoint make_time(int year, int month, int day, int hour, int minute) {
  using namespace std::chrono;
  if (month < 1 || month > 12)
    throw ValidationError("month " + std::to_string(month) + " out of range [1,12]");
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok())
    throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
  if (hour < 0 || hour > 23)
    throw ValidationError("hour " + std::to_string(hour) + " out of range [0,23]");
  if (minute < 0 || minute > 59)
    throw ValidationError("minute " + std::to_string(minute) + " out of range [0,59]");
  return sys_days{ymd} + hours{hour} + minutes{minute};
}

inline CivilTime to_civil(TimePoint t) {
  using namespace std::chrono;
  const auto dp = floor<days>(t);
  const year_month_day ymd{dp};
  const hh_mm_ss<minutes> tod{t - dp};
  return CivilTime{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day())),
                   int(tod.hours().count()), int(tod.minutes().count())};
}

/// ISO-8601 to minute precision, e.g. "2005-06-14T12:45Z".
inline std::string format_time(TimePoint t) {
  const CivilTime c = to_civil(t);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02dZ", c.year, c.month, c.day, c.hour,
                c.minute);
  return std::string(buf);
}

/// Parses "YYYY-MM-DDTHH:MM" with optional trailing 'Z'.
inline TimePoint parse_time(std::string_view s, const std::string& context = "timestamp") {
  std::string_view v = s;
  if (!v.empty() && v.back() == 'Z') v.remove_suffix(1);
  if (v.size() != 16 || v[4] != '-' || v[7] != '-' || v[10] != 'T' || v[13] != ':')
    throw ParseError(context + ": expected YYYY-MM-DDTHH:MM[Z], got '" + std::string(s) + "'");
  const int year = static_cast<int>(parse_int(v.substr(0, 4), context));
  const int month = static_cast<int>(parse_int(v.substr(5, 2), context));
  const int day = static_cast<int>(parse_int(v.substr(8, 2), context));
  const int hour = static_cast<int>(parse_int(v.substr(11, 2), context));
  const int minute = static_cast<int>(parse_int(v.substr(14, 2), context));
  return make_time(year, month, day, hour, minute);
}

/// Accepts a full timestamp or a bare date. A bare date expands to the start
/// of that day, or to 23:59 when `end_of_day` is set (range bounds are
/// inclusive at minute resolution).
inline TimePoint parse_time_or_date(std::string_view s, bool end_of_day,
                                    const std::string& context = "date") {
  if (s.size() == 10) {
    if (s[4] != '-' || s[7] != '-')
      throw ParseError(context + ": expected YYYY-MM-DD, got '" + std::string(s) + "'");
    const int year = static_cast<int>(parse_int(s.substr(0, 4), context));
    const int month = static_cast<int>(parse_int(s.substr(5, 2), context));
    const int day = static_cast<int>(parse_int(s.substr(8, 2), context));
    return make_time(year, month, day, end_of_day ? 23 : 0, end_of_day ? 59 : 0);
  }
  return parse_time(s, context);
}

/// Inclusive [start, end] window.
struct DateRange {
  TimePoint start{TimePoint::min()};
  TimePoint end{TimePoint::max()};

  bool contains(TimePoint t) const { return start <= t && t <= end; }
};

}  // namespace quakeb
