#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "quakeb/error.hpp"
#include "quakeb/time.hpp"
#include "quakeb/util.hpp"

namespace quakeb {

struct EarthquakeEvent {
  double longitude = 0;   // decimal degrees
  double latitude = 0;    // decimal degrees
  TimePoint occurrence_time{};
  double magnitude = 0;   // duration magnitude Md
  double depth = 0;       // km
  double duration = 0;    // seconds; carried through, unused by features
};

inline bool same_fields(const EarthquakeEvent& a, const EarthquakeEvent& b) {
  return a.longitude == b.longitude && a.latitude == b.latitude &&
         a.occurrence_time == b.occurrence_time && a.magnitude == b.magnitude &&
         a.depth == b.depth && a.duration == b.duration;
}

/// Chronologically ordered event sequence. parse_catalog/read_catalog_csv sort
/// on load; ties within a minute keep file order.
struct Catalog {
  std::vector<EarthquakeEvent> events;
  std::string source_label;
};

struct CatalogFilter {
  double cutoff_magnitude = 0;            // Mc; kept events satisfy magnitude >= Mc
  TimePoint start_date{TimePoint::min()}; // inclusive
  TimePoint end_date{TimePoint::max()};   // inclusive
};

namespace detail {

// .dat column order: longitude latitude year month day magnitude depth hour minute duration
inline EarthquakeEvent parse_dat_fields(const std::vector<std::string_view>& f,
                                        std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  EarthquakeEvent ev;
  ev.longitude = parse_double(f[0], where + " longitude");
  ev.latitude = parse_double(f[1], where + " latitude");
  const int year = static_cast<int>(parse_int(f[2], where + " year"));
  const int month = static_cast<int>(parse_int(f[3], where + " month"));
  const int day = static_cast<int>(parse_int(f[4], where + " day"));
  ev.magnitude = parse_double(f[5], where + " magnitude");
  ev.depth = parse_double(f[6], where + " depth");
  const int hour = static_cast<int>(parse_int(f[7], where + " hour"));
  const int minute = static_cast<int>(parse_int(f[8], where + " minute"));
  ev.duration = parse_double(f[9], where + " duration");
  try {
    ev.occurrence_time = make_time(year, month, day, hour, minute);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return ev;
}

}  // namespace detail

/// Parses the 10-column whitespace-separated .dat format. Blank lines and
/// lines starting with '#' are skipped; any other malformed line is a hard
/// error, since silently dropping rows would corrupt window indexing.
inline Catalog parse_catalog(std::istream& in, std::string source_label = "") {
  Catalog cat;
  cat.source_label = std::move(source_label);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_ws(body);
    if (fields.size() != 10)
      throw ParseError("line " + std::to_string(lineno) + ": expected 10 fields, got " +
                       std::to_string(fields.size()));
    cat.events.push_back(detail::parse_dat_fields(fields, lineno));
  }
  std::stable_sort(cat.events.begin(), cat.events.end(),
                   [](const EarthquakeEvent& a, const EarthquakeEvent& b) {
                     return a.occurrence_time < b.occurrence_time;
                   });
  return cat;
}

/// Keeps events with magnitude >= cutoff (inclusive) inside [start, end].
inline Catalog filter_catalog(const Catalog& catalog, const CatalogFilter& filter) {
  if (!(filter.cutoff_magnitude > 0))
    throw ValidationError("cutoff magnitude must be positive");
  if (filter.start_date > filter.end_date)
    throw ValidationError("filter start date is after end date");
  Catalog out;
  out.source_label = catalog.source_label;
  for (const EarthquakeEvent& ev : catalog.events) {
    if (ev.magnitude >= filter.cutoff_magnitude && filter.start_date <= ev.occurrence_time &&
        ev.occurrence_time <= filter.end_date)
      out.events.push_back(ev);
  }
  return out;
}

inline void write_catalog_dat(const Catalog& catalog, std::ostream& out) {
  for (const EarthquakeEvent& ev : catalog.events) {
    const CivilTime c = to_civil(ev.occurrence_time);
    out << format_double(ev.longitude) << ' ' << format_double(ev.latitude) << ' ' << c.year
        << ' ' << c.month << ' ' << c.day << ' ' << format_double(ev.magnitude) << ' '
        << format_double(ev.depth) << ' ' << c.hour << ' ' << c.minute << ' '
        << format_double(ev.duration) << '\n';
  }
}

inline constexpr const char* kCatalogCsvHeader = "longitude,latitude,datetime,magnitude,depth,duration";

inline void write_catalog_csv(const Catalog& catalog, std::ostream& out) {
  out << kCatalogCsvHeader << '\n';
  for (const EarthquakeEvent& ev : catalog.events) {
    out << format_double(ev.longitude) << ',' << format_double(ev.latitude) << ','
        << format_time(ev.occurrence_time) << ',' << format_double(ev.magnitude) << ','
        << format_double(ev.depth) << ',' << format_double(ev.duration) << '\n';
  }
}

inline Catalog read_catalog_csv(std::istream& in, std::string source_label = "") {
  Catalog cat;
  cat.source_label = std::move(source_label);
  std::string line;
  if (!std::getline(in, line) || std::string(trim(line)) != kCatalogCsvHeader)
    throw ParseError(std::string("catalog CSV must start with header '") + kCatalogCsvHeader +
                     "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto f = split_char(body, ',');
    if (f.size() != 6)
      throw ParseError("line " + std::to_string(lineno) + ": expected 6 fields, got " +
                       std::to_string(f.size()));
    const std::string where = "line " + std::to_string(lineno);
    EarthquakeEvent ev;
    ev.longitude = parse_double(f[0], where + " longitude");
    ev.latitude = parse_double(f[1], where + " latitude");
    ev.occurrence_time = parse_time(f[2], where + " datetime");
    ev.magnitude = parse_double(f[3], where + " magnitude");
    ev.depth = parse_double(f[4], where + " depth");
    ev.duration = parse_double(f[5], where + " duration");
    cat.events.push_back(ev);
  }
  std::stable_sort(cat.events.begin(), cat.events.end(),
                   [](const EarthquakeEvent& a, const EarthquakeEvent& b) {
                     return a.occurrence_time < b.occurrence_time;
                   });
  return cat;
}

}  // namespace quakeb
