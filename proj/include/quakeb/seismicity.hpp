#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "quakeb/catalog.hpp"
#include "quakeb/error.hpp"
#include "quakeb/time.hpp"
#include "quakeb/util.hpp"

namespace quakeb {

/// Region identity plus the knobs the pipeline needs: completeness cutoff,
/// training/test date windows, and the b-value window size.
struct RegionConfig {
  std::string name;
  int region_id = 0;
  double cutoff_magnitude = 0;
  DateRange train_window{};
  DateRange test_window{};
  std::size_t window_size = 50;
};

inline void validate(const RegionConfig& region) {
  if (!(region.cutoff_magnitude > 0))
    throw ValidationError("region '" + region.name + "': cutoff magnitude must be positive");
  if (region.window_size < 2)
    throw ValidationError("region '" + region.name + "': window size must be at least 2");
  if (region.train_window.start > region.train_window.end)
    throw ValidationError("region '" + region.name + "': training window start is after its end");
  if (region.test_window.start > region.test_window.end)
    throw ValidationError("region '" + region.name + "': test window start is after its end");
  // Windows may overlap (some regions' test span opens before training ends);
  // precedence is on the start instants.
  if (region.train_window.start > region.test_window.start)
    throw ValidationError("region '" + region.name + "': training window must precede test window");
}

enum class DatasetRole { training, test };

inline const char* to_string(DatasetRole role) {
  return role == DatasetRole::training ? "training" : "test";
}

/// Sliding-window b-values. values[j] (0-based) belongs to the window of
/// `window_size` consecutive events ending at event j + window_size in the
/// 1-based event indexing of the source catalog.
struct BValueSeries {
  std::vector<double> values;
  std::size_t window_size = 0;

  /// b-value attributed to 1-based series index k.
  double at(std::size_t k) const { return values[k - 1]; }
};

/// Seven inputs and the lookahead target, anchored to one catalog event.
struct FeatureVector {
  double x1 = 0, x2 = 0, x3 = 0, x4 = 0, x5 = 0;  // b-value changes, most recent first
  double x6 = 0;                                  // max magnitude in the prior 7 days
  double x7 = 0;                                  // P(Md >= 6.0) = 10^(-3b)
  double y = 0;                                   // max magnitude in the next 5 days, or 0
  std::size_t anchor_index = 0;                   // 1-based event index; 0 when not known
  TimePoint anchor_time{};

  std::array<double, 7> inputs() const { return {x1, x2, x3, x4, x5, x6, x7}; }
};

inline bool same_fields(const FeatureVector& a, const FeatureVector& b) {
  return a.x1 == b.x1 && a.x2 == b.x2 && a.x3 == b.x3 && a.x4 == b.x4 && a.x5 == b.x5 &&
         a.x6 == b.x6 && a.x7 == b.x7 && a.y == b.y && a.anchor_time == b.anchor_time;
}

struct Dataset {
  std::vector<FeatureVector> vectors;
  RegionConfig region;
  DatasetRole role = DatasetRole::training;
};

/// Maximum-likelihood (Aki-Utsu) b-value over one window of magnitudes:
/// b = log10(e) / (mean(M) - Mc). Magnitudes are summed in the order given so
/// that independent recomputations reproduce the value bit for bit.
inline double estimate_b(std::span<const double> window, double cutoff) {
  if (window.size() < 2)
    throw ValidationError("b-value window needs at least 2 magnitudes, got " +
                          std::to_string(window.size()));
  double sum = 0;
  for (const double m : window) sum += m;
  const double mean = sum / static_cast<double>(window.size());
  if (mean == cutoff)
    throw ValidationError("degenerate b-value window: all magnitudes at the cutoff");
  if (mean < cutoff)
    throw ValidationError("b-value window mean is below the cutoff magnitude");
  return std::numbers::log10e / (mean - cutoff);
}

/// Stride-1 sliding windows over an already cutoff-filtered catalog.
inline BValueSeries b_series(const Catalog& catalog, std::size_t window_size, double cutoff) {
  const std::size_t n = catalog.events.size();
  if (n < window_size)
    throw InsufficientDataError(
        "b-value series needs " + std::to_string(window_size) + " events, catalog has " +
            std::to_string(n) + " (" + std::to_string(window_size - n) + " short)",
        n);
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = catalog.events[i].magnitude;
  BValueSeries series;
  series.window_size = window_size;
  series.values.reserve(n - window_size + 1);
  for (std::size_t start = 0; start + window_size <= n; ++start)
    series.values.push_back(estimate_b({mags.data() + start, window_size}, cutoff));
  return series;
}

/// The five b-value changes ending at 1-based series index k:
/// x_j = b(k - 4(j-1)) - b(k - 4j). Needs 20 earlier series entries.
inline std::array<double, 5> delta_features(const BValueSeries& series, std::size_t k) {
  if (k < 21)
    throw InsufficientDataError("b-value change features need series index >= 21, got " +
                                    std::to_string(k),
                                k);
  if (k > series.values.size())
    throw ValidationError("series index " + std::to_string(k) + " out of range (length " +
                          std::to_string(series.values.size()) + ")");
  std::array<double, 5> x{};
  for (std::size_t j = 0; j < 5; ++j) x[j] = series.at(k - 4 * j) - series.at(k - 4 * (j + 1));
  return x;
}

/// Largest magnitude in [anchor_time - 7 days, anchor_time); 0 when that
/// window holds no events. The anchor itself (and anything sharing its
/// minute) falls outside the half-open interval.
inline double max_prior_week(const Catalog& catalog, std::size_t anchor) {
  if (anchor < 1 || anchor > catalog.events.size())
    throw ValidationError("anchor index " + std::to_string(anchor) + " out of range");
  const TimePoint t0 = catalog.events[anchor - 1].occurrence_time;
  const TimePoint from = t0 - std::chrono::days(7);
  double best = 0;
  for (const EarthquakeEvent& ev : catalog.events) {
    if (ev.occurrence_time >= t0) break;  // events are chronological
    if (ev.occurrence_time >= from) best = std::max(best, ev.magnitude);
  }
  return best;
}

/// P(Md >= 6.0) from the Gutenberg-Richter law with the exponent fixed at 3.
inline double prob_m6(double b) {
  if (!(std::isfinite(b) && b >= 0))
    throw ValidationError("b-value must be finite and non-negative");
  return std::pow(10.0, -3.0 * b);
}

/// Largest magnitude in (anchor_time, anchor_time + 5 days], or 0 when the
/// window is empty or its maximum falls below the cutoff.
inline double target(const Catalog& catalog, std::size_t anchor, double cutoff) {
  if (anchor < 1 || anchor > catalog.events.size())
    throw ValidationError("anchor index " + std::to_string(anchor) + " out of range");
  const TimePoint t0 = catalog.events[anchor - 1].occurrence_time;
  const TimePoint until = t0 + std::chrono::days(5);
  double best = 0;
  bool any = false;
  for (const EarthquakeEvent& ev : catalog.events) {
    if (ev.occurrence_time > until) break;
    if (ev.occurrence_time > t0) {
      best = std::max(best, ev.magnitude);
      any = true;
    }
  }
  if (!any || best < cutoff) return 0;
  return best;
}

/// One feature vector per qualifying anchor inside the role's date window,
/// chronological. An anchor qualifies when it has window_size + 20 prior
/// events (70 for the default window of 50). With `count` set the result is
/// truncated to exactly that many vectors, and falling short is an error.
inline Dataset build_dataset(const Catalog& catalog, const RegionConfig& region, DatasetRole role,
                             std::optional<std::size_t> count = std::nullopt) {
  validate(region);
  for (const EarthquakeEvent& ev : catalog.events)
    if (ev.magnitude < region.cutoff_magnitude)
      throw ValidationError("catalog is not filtered at the region cutoff (found magnitude " +
                            format_double(ev.magnitude) + " below " +
                            format_double(region.cutoff_magnitude) + ")");

  const std::size_t w = region.window_size;
  const std::size_t n = catalog.events.size();
  const DateRange& window =
      role == DatasetRole::training ? region.train_window : region.test_window;

  Dataset ds;
  ds.region = region;
  ds.role = role;
  if (n >= w + 20) {
    const BValueSeries series = b_series(catalog, w, region.cutoff_magnitude);
    for (std::size_t anchor = w + 20; anchor <= n; ++anchor) {
      const TimePoint t = catalog.events[anchor - 1].occurrence_time;
      if (!window.contains(t)) continue;
      const std::size_t k = anchor - w + 1;  // series index aligned to the anchor
      const auto dx = delta_features(series, k);
      FeatureVector fv;
      fv.x1 = dx[0];
      fv.x2 = dx[1];
      fv.x3 = dx[2];
      fv.x4 = dx[3];
      fv.x5 = dx[4];
      fv.x6 = max_prior_week(catalog, anchor);
      fv.x7 = prob_m6(series.at(k));
      fv.y = target(catalog, anchor, region.cutoff_magnitude);
      fv.anchor_index = anchor;
      fv.anchor_time = t;
      ds.vectors.push_back(fv);
      if (count && ds.vectors.size() == *count) break;
    }
  }
  if (count && ds.vectors.size() < *count)
    throw InsufficientDataError("requested " + std::to_string(*count) + " " + to_string(role) +
                                    " vectors, only " + std::to_string(ds.vectors.size()) +
                                    " achievable in the " + to_string(role) + " window",
                                ds.vectors.size());
  return ds;
}

/// Duplicates the k vectors with the largest targets (ties broken by earlier
/// anchor time) and appends them, leaving the original vectors untouched.
inline Dataset augment_dataset(const Dataset& dataset, std::size_t k) {
  if (dataset.role != DatasetRole::training)
    throw ValidationError("augmentation applies to training datasets only");
  if (k > dataset.vectors.size())
    throw ValidationError("cannot duplicate " + std::to_string(k) + " vectors from a dataset of " +
                          std::to_string(dataset.vectors.size()));
  std::vector<std::size_t> order(dataset.vectors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const FeatureVector& va = dataset.vectors[a];
    const FeatureVector& vb = dataset.vectors[b];
    if (va.y != vb.y) return va.y > vb.y;
    return va.anchor_time < vb.anchor_time;
  });
  Dataset out = dataset;
  for (std::size_t i = 0; i < k; ++i) out.vectors.push_back(dataset.vectors[order[i]]);
  return out;
}

inline constexpr const char* kDatasetCsvHeader = "anchor_time,x1,x2,x3,x4,x5,x6,x7,y";

inline void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  out << kDatasetCsvHeader << '\n';
  for (const FeatureVector& v : dataset.vectors) {
    out << format_time(v.anchor_time) << ',' << format_double(v.x1) << ',' << format_double(v.x2)
        << ',' << format_double(v.x3) << ',' << format_double(v.x4) << ',' << format_double(v.x5)
        << ',' << format_double(v.x6) << ',' << format_double(v.x7) << ',' << format_double(v.y)
        << '\n';
  }
}

/// Anchor indices are not persisted in the CSV; imported vectors carry 0.
inline Dataset read_dataset_csv(std::istream& in, RegionConfig region = {},
                                DatasetRole role = DatasetRole::training) {
  Dataset ds;
  ds.region = std::move(region);
  ds.role = role;
  std::string line;
  if (!std::getline(in, line) || std::string(trim(line)) != kDatasetCsvHeader)
    throw ParseError(std::string("dataset CSV must start with header '") + kDatasetCsvHeader + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto f = split_char(body, ',');
    if (f.size() != 9)
      throw ParseError("line " + std::to_string(lineno) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    const std::string where = "line " + std::to_string(lineno);
    FeatureVector v;
    v.anchor_time = parse_time(f[0], where + " anchor_time");
    v.x1 = parse_double(f[1], where + " x1");
    v.x2 = parse_double(f[2], where + " x2");
    v.x3 = parse_double(f[3], where + " x3");
    v.x4 = parse_double(f[4], where + " x4");
    v.x5 = parse_double(f[5], where + " x5");
    v.x6 = parse_double(f[6], where + " x6");
    v.x7 = parse_double(f[7], where + " x7");
    v.y = parse_double(f[8], where + " y");
    ds.vectors.push_back(v);
  }
  return ds;
}

// ---- region config files: flat "key = value" text -------------------------

inline RegionConfig parse_region_config(std::istream& in) {
  RegionConfig region;
  bool have_name = false, have_cutoff = false;
  bool have_ts = false, have_te = false, have_vs = false, have_ve = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("region config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key{trim(body.substr(0, eq))};
    const std::string value{trim(body.substr(eq + 1))};
    const std::string where = "region config line " + std::to_string(lineno) + " (" + key + ")";
    if (key == "name") {
      region.name = value;
      have_name = true;
    } else if (key == "region_id") {
      region.region_id = static_cast<int>(parse_int(value, where));
    } else if (key == "cutoff_magnitude") {
      region.cutoff_magnitude = parse_double(value, where);
      have_cutoff = true;
    } else if (key == "window_size") {
      region.window_size = static_cast<std::size_t>(parse_int(value, where));
    } else if (key == "train_start") {
      region.train_window.start = parse_time_or_date(value, false, where);
      have_ts = true;
    } else if (key == "train_end") {
      region.train_window.end = parse_time_or_date(value, true, where);
      have_te = true;
    } else if (key == "test_start") {
      region.test_window.start = parse_time_or_date(value, false, where);
      have_vs = true;
    } else if (key == "test_end") {
      region.test_window.end = parse_time_or_date(value, true, where);
      have_ve = true;
    } else {
      throw ParseError("region config line " + std::to_string(lineno) + ": unknown key '" + key +
                       "'");
    }
  }
  if (!have_name || !have_cutoff || !have_ts || !have_te || !have_vs || !have_ve)
    throw ParseError(
        "region config must set name, cutoff_magnitude, train_start/train_end and "
        "test_start/test_end");
  validate(region);
  return region;
}

inline void write_region_config(const RegionConfig& region, std::ostream& out) {
  out << "name = " << region.name << '\n'
      << "region_id = " << region.region_id << '\n'
      << "cutoff_magnitude = " << format_double(region.cutoff_magnitude) << '\n'
      << "window_size = " << region.window_size << '\n'
      << "train_start = " << format_time(region.train_window.start) << '\n'
      << "train_end = " << format_time(region.train_window.end) << '\n'
      << "test_start = " << format_time(region.test_window.start) << '\n'
      << "test_end = " << format_time(region.test_window.end) << '\n';
}

namespace detail {

inline RegionConfig make_preset(std::string name, int id, double cutoff, int y0, int m0, int d0,
                                int y1, int m1, int d1, int y2, int m2, int d2, int y3, int m3,
                                int d3) {
  RegionConfig r;
  r.name = std::move(name);
  r.region_id = id;
  r.cutoff_magnitude = cutoff;
  r.train_window = {make_time(y0, m0, d0, 0, 0), make_time(y1, m1, d1, 23, 59)};
  r.test_window = {make_time(y2, m2, d2, 0, 0), make_time(y3, m3, d3, 23, 59)};
  return r;
}

}  // namespace detail

/// The four built-in Western Anatolia study regions.
inline const std::vector<RegionConfig>& region_presets() {
  static const std::vector<RegionConfig> presets = {
      detail::make_preset("golhisar-cameli", 1, 3.0, 2007, 11, 1, 2010, 10, 25, 2010, 10, 31,
                          2013, 12, 28),
      detail::make_preset("burdur", 2, 2.8, 2006, 1, 3, 2009, 3, 25, 2009, 4, 7, 2013, 12, 19),
      detail::make_preset("menderes", 3, 2.9, 2010, 3, 10, 2011, 1, 11, 2010, 10, 6, 2013, 12,
                          18),
      detail::make_preset("gediz-alasehir", 4, 2.8, 2007, 12, 3, 2010, 5, 10, 2010, 5, 10, 2013,
                          12, 5),
  };
  return presets;
}

/// Looks a preset up by name or by the "region<N>" alias; nullptr if absent.
inline const RegionConfig* find_region_preset(std::string_view name) {
  for (const RegionConfig& r : region_presets()) {
    if (name == r.name || name == "region" + std::to_string(r.region_id)) return &r;
  }
  return nullptr;
}

}  // namespace quakeb
