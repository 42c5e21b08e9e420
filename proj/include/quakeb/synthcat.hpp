#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quakeb/catalog.hpp"
#include "quakeb/error.hpp"
#include "quakeb/rng.hpp"
#include "quakeb/time.hpp"
#include "quakeb/util.hpp"

namespace quakeb {

/// Aftershock shaping: each event at or above the trigger magnitude spawns a
/// Poisson(K) cluster whose time offsets follow the (t + c)^-p decay.
struct OmoriParams {
  double productivity = 1.0;       // K, expected aftershocks per trigger
  double offset_days = 0.05;       // c
  double decay_exponent = 1.1;     // p
  double trigger_magnitude = 4.5;
};

struct SynthParams {
  double b_true = 1.0;
  double cutoff = 3.0;
  double rate_per_day = 1.0;        // background Poisson intensity
  double duration_days = 365.0;
  std::uint64_t seed = 0;
  std::optional<OmoriParams> aftershocks;
  bool bin_magnitudes = false;      // quantize to 0.1 units above the cutoff
  double base_longitude = 29.0;
  double base_latitude = 37.5;
};

inline void validate(const SynthParams& params) {
  if (!(params.b_true > 0)) throw ValidationError("b_true must be positive");
  if (!(params.cutoff > 0)) throw ValidationError("cutoff magnitude must be positive");
  if (!(params.rate_per_day > 0)) throw ValidationError("event rate must be positive");
  if (!(params.duration_days > 0)) throw ValidationError("duration must be positive");
  if (params.aftershocks) {
    const OmoriParams& o = *params.aftershocks;
    if (!(o.productivity >= 0)) throw ValidationError("aftershock productivity must be >= 0");
    if (!(o.offset_days > 0)) throw ValidationError("aftershock time offset must be positive");
    if (!(o.decay_exponent > 0)) throw ValidationError("aftershock decay exponent must be positive");
  }
}

namespace detail {

/// Gutenberg-Richter inverse CDF; u in (0,1) keeps every draw above cutoff.
inline double gr_magnitude(SplitMix64& rng, double cutoff, double b_true) {
  return cutoff - std::log10(rng.uniform_open()) / b_true;
}

inline double bin_magnitude(double m, double cutoff) {
  return cutoff + std::round((m - cutoff) * 10.0) / 10.0;
}

/// Knuth's product-of-uniforms Poisson sampler; fine for small means.
inline std::uint64_t poisson(SplitMix64& rng, double mean) {
  if (mean <= 0) return 0;
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = 1.0;
  do {
    ++k;
    prod *= rng.uniform_open();
  } while (prod > limit);
  return k - 1;
}

/// Inverse CDF of the truncated Omori density (t + c)^-p on [0, window].
inline double omori_offset(SplitMix64& rng, double c, double p, double window) {
  const double u = rng.uniform();
  if (p == 1.0) return c * std::exp(u * std::log((window + c) / c)) - c;
  const double q = 1.0 - p;
  const double span = std::pow(window + c, q) - std::pow(c, q);
  return std::pow(std::pow(c, q) + u * span, 1.0 / q) - c;
}

/// Calendar placement: day offsets quantize to whole minutes from a fixed
/// origin, so written catalogs round-trip exactly.
inline TimePoint day_to_time(double day) {
  static const TimePoint origin = make_time(2000, 1, 1, 0, 0);
  return origin + std::chrono::minutes(static_cast<std::int64_t>(std::floor(day * 1440.0)));
}

inline EarthquakeEvent make_event(SplitMix64& rng, const SynthParams& params, double day,
                                  double magnitude) {
  EarthquakeEvent ev;
  ev.occurrence_time = day_to_time(day);
  ev.magnitude = params.bin_magnitudes ? bin_magnitude(magnitude, params.cutoff) : magnitude;
  ev.longitude = params.base_longitude + rng.uniform_in(-0.25, 0.25);
  ev.latitude = params.base_latitude + rng.uniform_in(-0.25, 0.25);
  ev.depth = rng.uniform_in(2.0, 20.0);
  ev.duration = 0.0;
  return ev;
}

}  // namespace detail

/// Homogeneous Poisson background with Gutenberg-Richter magnitudes, plus
/// optional Omori-shaped aftershock clusters. Background and aftershock draws
/// use separate seeded streams, so the background events are identical with
/// aftershocks on or off.
inline Catalog gen_catalog(const SynthParams& params) {
  validate(params);
  SplitMix64 background(params.seed);
  SplitMix64 secondary(params.seed ^ 0xa0761d6478bd642fULL);

  struct Raw {
    double day;
    double magnitude;
  };
  std::vector<Raw> triggers;
  Catalog catalog;
  catalog.source_label = "synthetic";

  double t = 0;
  while (true) {
    t += -std::log(background.uniform_open()) / params.rate_per_day;
    if (t > params.duration_days) break;
    const double m = detail::gr_magnitude(background, params.cutoff, params.b_true);
    catalog.events.push_back(detail::make_event(background, params, t, m));
    if (params.aftershocks && m >= params.aftershocks->trigger_magnitude)
      triggers.push_back({t, m});
  }

  if (params.aftershocks) {
    const OmoriParams& o = *params.aftershocks;
    for (const Raw& trigger : triggers) {
      const double window = params.duration_days - trigger.day;
      if (window <= 0) continue;
      const std::uint64_t n = detail::poisson(secondary, o.productivity);
      for (std::uint64_t i = 0; i < n; ++i) {
        const double off =
            detail::omori_offset(secondary, o.offset_days, o.decay_exponent, window);
        const double m = detail::gr_magnitude(secondary, params.cutoff, params.b_true);
        catalog.events.push_back(detail::make_event(secondary, params, trigger.day + off, m));
      }
    }
    std::stable_sort(catalog.events.begin(), catalog.events.end(),
                     [](const EarthquakeEvent& a, const EarthquakeEvent& b) {
                       return a.occurrence_time < b.occurrence_time;
                     });
  }
  return catalog;
}

struct YearStat {
  int year = 0;
  std::size_t count = 0;
  double mean_magnitude = 0;
};

/// Per-calendar-year counts and mean magnitudes, ascending by year. Sums run
/// in catalog order so independent recomputation matches exactly.
inline std::vector<YearStat> yearly_stats(const Catalog& catalog) {
  std::map<int, std::pair<std::size_t, double>> buckets;  // year -> (count, sum)
  for (const EarthquakeEvent& ev : catalog.events) {
    const CivilTime ct = to_civil(ev.occurrence_time);
    auto& [count, sum] = buckets[ct.year];
    ++count;
    sum += ev.magnitude;
  }
  std::vector<YearStat> rows;
  rows.reserve(buckets.size());
  for (const auto& [year, bucket] : buckets)
    rows.push_back({year, bucket.first, bucket.second / static_cast<double>(bucket.first)});
  return rows;
}

inline constexpr const char* kYearlyStatsCsvHeader = "year,count,mean_magnitude";

inline void write_yearly_stats_csv(const std::vector<YearStat>& rows, std::ostream& out) {
  out << kYearlyStatsCsvHeader << '\n';
  for (const YearStat& r : rows)
    out << r.year << ',' << r.count << ',' << format_double(r.mean_magnitude) << '\n';
}

}  // namespace quakeb
