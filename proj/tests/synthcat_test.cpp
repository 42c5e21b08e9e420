#include "quakeb/synthcat.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "quakeb/seismicity.hpp"

namespace quakeb {
namespace {

SynthParams base_params() {
  SynthParams p;
  p.b_true = 1.0;
  p.cutoff = 3.0;
  p.rate_per_day = 2.0;
  p.duration_days = 400.0;
  p.seed = 101;
  return p;
}

TEST(GenCatalog, SeedDeterminism) {
  const Catalog a = gen_catalog(base_params());
  const Catalog b = gen_catalog(base_params());
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i)
    EXPECT_TRUE(same_fields(a.events[i], b.events[i])) << "event " << i;
  SynthParams other = base_params();
  other.seed = 102;
  const Catalog c = gen_catalog(other);
  EXPECT_FALSE(c.events.size() == a.events.size() &&
               std::equal(a.events.begin(), a.events.end(), c.events.begin(),
                          [](const EarthquakeEvent& x, const EarthquakeEvent& y) {
                            return same_fields(x, y);
                          }));
}

TEST(GenCatalog, EventsRespectCutoffTimeSpanAndOrder) {
  SynthParams p = base_params();
  p.aftershocks = OmoriParams{.productivity = 3.0, .trigger_magnitude = 4.0};
  const Catalog cat = gen_catalog(p);
  ASSERT_GT(cat.events.size(), 100u);
  const TimePoint origin = make_time(2000, 1, 1, 0, 0);
  const TimePoint last_allowed =
      origin + std::chrono::minutes(static_cast<int>(p.duration_days * 1440.0));
  for (std::size_t i = 0; i < cat.events.size(); ++i) {
    const EarthquakeEvent& ev = cat.events[i];
    EXPECT_GE(ev.magnitude, p.cutoff);
    EXPECT_GE(ev.occurrence_time, origin);
    EXPECT_LE(ev.occurrence_time, last_allowed);
    EXPECT_EQ(ev.duration, 0.0);
    if (i) {
      EXPECT_GE(ev.occurrence_time, cat.events[i - 1].occurrence_time);
    }
  }
}

TEST(GenCatalog, WholeCatalogEstimateRecoversTrueB) {
  SynthParams p;
  p.b_true = 1.0;
  p.cutoff = 3.0;
  p.rate_per_day = 25.0;
  p.duration_days = 500.0;
  p.seed = 7;
  const Catalog cat = gen_catalog(p);
  ASSERT_GE(cat.events.size(), 10000u);
  std::vector<double> mags;
  for (const EarthquakeEvent& ev : cat.events) mags.push_back(ev.magnitude);
  const double b = estimate_b(mags, p.cutoff);
  EXPECT_GT(b, 0.95);
  EXPECT_LT(b, 1.05);
}

TEST(GenCatalog, MagnitudesFollowTheSurvivorLaw) {
  SynthParams p;
  p.b_true = 1.0;
  p.cutoff = 3.0;
  p.rate_per_day = 25.0;
  p.duration_days = 450.0;
  p.seed = 11;
  const Catalog cat = gen_catalog(p);
  const double n = static_cast<double>(cat.events.size());
  ASSERT_GE(n, 10000.0);
  for (const double d : {0.5, 1.0}) {
    const double expected = std::pow(10.0, -p.b_true * d);
    double count = 0;
    for (const EarthquakeEvent& ev : cat.events)
      if (ev.magnitude >= p.cutoff + d) count += 1;
    const double fraction = count / n;
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    EXPECT_NEAR(fraction, expected, 3.0 * se) << "survivor offset " << d;
  }
}

TEST(GenCatalog, ZeroProductivityMatchesNoAftershockRun) {
  SynthParams without = base_params();
  SynthParams with_zero = base_params();
  with_zero.aftershocks = OmoriParams{.productivity = 0.0};
  const Catalog a = gen_catalog(without);
  const Catalog b = gen_catalog(with_zero);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i)
    EXPECT_TRUE(same_fields(a.events[i], b.events[i]));
}

TEST(GenCatalog, AftershocksOnlyAddEvents) {
  SynthParams plain = base_params();
  plain.duration_days = 800.0;
  SynthParams clustered = plain;
  clustered.aftershocks = OmoriParams{.productivity = 5.0, .trigger_magnitude = 4.5};
  const Catalog background = gen_catalog(plain);
  const Catalog mixed = gen_catalog(clustered);
  EXPECT_GT(mixed.events.size(), background.events.size());
  // Every background event survives unchanged.
  std::size_t j = 0;
  for (const EarthquakeEvent& ev : background.events) {
    while (j < mixed.events.size() && !same_fields(mixed.events[j], ev)) ++j;
    ASSERT_LT(j, mixed.events.size()) << "background event missing from clustered catalog";
    ++j;
  }
}

TEST(GenCatalog, InterEventGapsAreExponentialWithoutAftershocks) {
  SynthParams p = base_params();
  p.duration_days = 600.0;
  const Catalog cat = gen_catalog(p);
  std::vector<double> gaps;
  TimePoint prev = make_time(2000, 1, 1, 0, 0);
  for (const EarthquakeEvent& ev : cat.events) {
    gaps.push_back(std::chrono::duration<double, std::ratio<86400>>(ev.occurrence_time - prev)
                       .count());
    prev = ev.occurrence_time;
  }
  ASSERT_GT(gaps.size(), 800u);
  std::sort(gaps.begin(), gaps.end());
  // Kolmogorov-Smirnov distance against Exponential(rate).
  double d_stat = 0;
  const double n = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-p.rate_per_day * gaps[i]);
    d_stat = std::max(d_stat, std::fabs(cdf - static_cast<double>(i + 1) / n));
    d_stat = std::max(d_stat, std::fabs(cdf - static_cast<double>(i) / n));
  }
  EXPECT_LT(d_stat, 1.63 / std::sqrt(n));  // 1% critical value
}

TEST(GenCatalog, BinnedMagnitudesSitOnTenthsAboveCutoff) {
  SynthParams p = base_params();
  p.cutoff = 2.8;
  p.bin_magnitudes = true;
  const Catalog cat = gen_catalog(p);
  for (const EarthquakeEvent& ev : cat.events) {
    EXPECT_GE(ev.magnitude, p.cutoff);
    const double steps = (ev.magnitude - p.cutoff) * 10.0;
    EXPECT_NEAR(steps, std::round(steps), 1e-9);
  }
}

TEST(GenCatalog, RejectsInvalidParams) {
  SynthParams p = base_params();
  p.b_true = 0.0;
  EXPECT_THROW(gen_catalog(p), ValidationError);
  p = base_params();
  p.rate_per_day = -1.0;
  EXPECT_THROW(gen_catalog(p), ValidationError);
  p = base_params();
  p.duration_days = 0.0;
  EXPECT_THROW(gen_catalog(p), ValidationError);
  p = base_params();
  p.aftershocks = OmoriParams{.offset_days = 0.0};
  EXPECT_THROW(gen_catalog(p), ValidationError);
  p = base_params();
  p.aftershocks = OmoriParams{.decay_exponent = 0.0};
  EXPECT_THROW(gen_catalog(p), ValidationError);
  p = base_params();
  p.aftershocks = OmoriParams{.productivity = -2.0};
  EXPECT_THROW(gen_catalog(p), ValidationError);
}

TEST(GenCatalog, DatRoundTripIsFieldExact) {
  const Catalog cat = gen_catalog(base_params());
  std::ostringstream out;
  write_catalog_dat(cat, out);
  std::istringstream in(out.str());
  const Catalog again = parse_catalog(in);
  ASSERT_EQ(again.events.size(), cat.events.size());
  for (std::size_t i = 0; i < cat.events.size(); ++i)
    EXPECT_TRUE(same_fields(cat.events[i], again.events[i])) << "event " << i;
}

TEST(YearlyStats, SingleEvent) {
  Catalog cat;
  EarthquakeEvent ev;
  ev.occurrence_time = make_time(2005, 6, 14, 12, 45);
  ev.magnitude = 3.4;
  cat.events.push_back(ev);
  const auto rows = yearly_stats(cat);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].year, 2005);
  EXPECT_EQ(rows[0].count, 1u);
  EXPECT_EQ(rows[0].mean_magnitude, 3.4);
}

TEST(YearlyStats, EmptyCatalogGivesNoRows) {
  EXPECT_TRUE(yearly_stats(Catalog{}).empty());
}

TEST(YearlyStats, MatchesBruteForceExactlyAndIsYearOrdered) {
  SynthParams p = base_params();
  p.duration_days = 1500.0;  // spans several calendar years
  const Catalog cat = gen_catalog(p);
  const auto rows = yearly_stats(cat);
  ASSERT_GE(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].year, rows[i].year);
  for (const YearStat& row : rows) {
    std::size_t count = 0;
    double sum = 0;
    for (const EarthquakeEvent& ev : cat.events) {
      if (to_civil(ev.occurrence_time).year == row.year) {
        ++count;
        sum += ev.magnitude;
      }
    }
    EXPECT_EQ(row.count, count);
    EXPECT_EQ(row.mean_magnitude, sum / static_cast<double>(count));
  }
}

TEST(YearlyStats, CsvFormat) {
  Catalog cat;
  EarthquakeEvent ev;
  ev.occurrence_time = make_time(2005, 6, 14, 12, 45);
  ev.magnitude = 3.5;
  cat.events.push_back(ev);
  ev.occurrence_time = make_time(2005, 7, 1, 0, 0);
  ev.magnitude = 4.5;
  cat.events.push_back(ev);
  std::ostringstream out;
  write_yearly_stats_csv(yearly_stats(cat), out);
  EXPECT_EQ(out.str(), "year,count,mean_magnitude\n2005,2,4\n");
}

}  // namespace
}  // namespace quakeb
