#include "quakeb/catalog.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "quakeb/rng.hpp"
#include "quakeb/time.hpp"

namespace quakeb {
namespace {

Catalog parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_catalog(in);
}

EarthquakeEvent make_test_event(TimePoint t, double magnitude) {
  EarthquakeEvent ev;
  ev.longitude = 29.0;
  ev.latitude = 37.0;
  ev.occurrence_time = t;
  ev.magnitude = magnitude;
  ev.depth = 7.0;
  ev.duration = 0.0;
  return ev;
}

TEST(ParseCatalog, MapsColumnsInOrder) {
  const Catalog cat = parse_str("29.35 37.12 2005 6 14 3.4 7.0 12 45 0.0\n");
  ASSERT_EQ(cat.events.size(), 1u);
  const EarthquakeEvent& ev = cat.events[0];
  EXPECT_EQ(ev.longitude, 29.35);
  EXPECT_EQ(ev.latitude, 37.12);
  EXPECT_EQ(format_time(ev.occurrence_time), "2005-06-14T12:45Z");
  EXPECT_EQ(ev.magnitude, 3.4);
  EXPECT_EQ(ev.depth, 7.0);
  EXPECT_EQ(ev.duration, 0.0);
}

TEST(ParseCatalog, EmptyStreamYieldsEmptyCatalog) {
  EXPECT_TRUE(parse_str("").events.empty());
}

TEST(ParseCatalog, WrongTokenCountNamesTheLine) {
  try {
    parse_str("29.35 37.12 2005 6 14 3.4 7.0 12 45 0.0\n29.0 37.0 2006 1 2 3.1 5.0 8 30\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ParseCatalog, NonNumericTokenIsAParseError) {
  EXPECT_THROW(parse_str("x 37.12 2005 6 14 3.4 7.0 12 45 0.0\n"), ParseError);
  EXPECT_THROW(parse_str("29.35 37.12 2005 6 14 bad 7.0 12 45 0.0\n"), ParseError);
}

TEST(ParseCatalog, InvalidCalendarIsAValidationError) {
  EXPECT_THROW(parse_str("29.0 37.0 2005 13 1 3.4 7.0 0 0 0.0\n"), ValidationError);
  EXPECT_THROW(parse_str("29.0 37.0 2005 2 30 3.4 7.0 0 0 0.0\n"), ValidationError);
  EXPECT_THROW(parse_str("29.0 37.0 2005 6 14 3.4 7.0 24 0 0.0\n"), ValidationError);
  EXPECT_THROW(parse_str("29.0 37.0 2005 6 14 3.4 7.0 12 60 0.0\n"), ValidationError);
}

TEST(ParseCatalog, SkipsBlankAndCommentLines) {
  const Catalog cat = parse_str(
      "# fixture header\n"
      "\n"
      "29.35 37.12 2005 6 14 3.4 7.0 12 45 0.0\n"
      "   \n"
      "# trailing comment\n");
  EXPECT_EQ(cat.events.size(), 1u);
}

TEST(ParseCatalog, SortsUnorderedRowsAndKeepsFileOrderOnTies) {
  const Catalog cat = parse_str(
      "29.0 37.0 2006 1 2 3.1 5.0 8 30 0.0\n"
      "29.0 37.0 2005 6 14 3.4 7.0 12 45 0.0\n"
      "29.0 37.0 2006 1 2 3.9 5.0 8 30 0.0\n");
  ASSERT_EQ(cat.events.size(), 3u);
  EXPECT_EQ(cat.events[0].magnitude, 3.4);
  EXPECT_EQ(cat.events[1].magnitude, 3.1);  // same minute as the 3.9 row, earlier in the file
  EXPECT_EQ(cat.events[2].magnitude, 3.9);
}

TEST(FilterCatalog, CutoffIsInclusive) {
  Catalog cat;
  cat.events = {make_test_event(make_time(2005, 1, 1, 0, 0), 2.9),
                make_test_event(make_time(2005, 1, 2, 0, 0), 3.0),
                make_test_event(make_time(2005, 1, 3, 0, 0), 3.1)};
  const Catalog kept = filter_catalog(cat, {.cutoff_magnitude = 3.0});
  ASSERT_EQ(kept.events.size(), 2u);
  EXPECT_EQ(kept.events[0].magnitude, 3.0);
  EXPECT_EQ(kept.events[1].magnitude, 3.1);
}

TEST(FilterCatalog, DateBoundsAreInclusive) {
  Catalog cat;
  cat.events = {make_test_event(make_time(2005, 1, 1, 0, 0), 3.0),
                make_test_event(make_time(2005, 1, 2, 0, 0), 3.0),
                make_test_event(make_time(2005, 1, 3, 0, 0), 3.0)};
  CatalogFilter f;
  f.cutoff_magnitude = 1.0;
  f.start_date = make_time(2005, 1, 1, 0, 0);
  f.end_date = make_time(2005, 1, 2, 0, 0);
  EXPECT_EQ(filter_catalog(cat, f).events.size(), 2u);
}

TEST(FilterCatalog, EmptyResultIsLegal) {
  Catalog cat;
  cat.events = {make_test_event(make_time(2005, 1, 1, 0, 0), 2.0)};
  EXPECT_TRUE(filter_catalog(cat, {.cutoff_magnitude = 5.0}).events.empty());
}

TEST(FilterCatalog, RejectsBadFilters) {
  Catalog cat;
  EXPECT_THROW(filter_catalog(cat, {.cutoff_magnitude = 0.0}), ValidationError);
  CatalogFilter f;
  f.cutoff_magnitude = 3.0;
  f.start_date = make_time(2006, 1, 1, 0, 0);
  f.end_date = make_time(2005, 1, 1, 0, 0);
  EXPECT_THROW(filter_catalog(cat, f), ValidationError);
}

TEST(FilterCatalog, MatchesExhaustiveScanAndPartitions) {
  SplitMix64 rng(7);
  Catalog cat;
  TimePoint t = make_time(2004, 1, 1, 0, 0);
  for (int i = 0; i < 200; ++i) {
    t += std::chrono::minutes(1 + static_cast<int>(rng.next() % 5000));
    cat.events.push_back(make_test_event(t, 2.0 + rng.uniform() * 3.0));
  }
  CatalogFilter f;
  f.cutoff_magnitude = 2.8;
  f.start_date = make_time(2004, 3, 1, 0, 0);
  f.end_date = make_time(2004, 11, 30, 23, 59);
  const Catalog kept = filter_catalog(cat, f);

  std::vector<EarthquakeEvent> expected;
  std::size_t rejected = 0;
  for (const EarthquakeEvent& ev : cat.events) {
    if (ev.magnitude >= f.cutoff_magnitude && f.start_date <= ev.occurrence_time &&
        ev.occurrence_time <= f.end_date)
      expected.push_back(ev);
    else
      ++rejected;
  }
  ASSERT_EQ(kept.events.size(), expected.size());
  EXPECT_EQ(kept.events.size() + rejected, cat.events.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_TRUE(same_fields(kept.events[i], expected[i])) << "row " << i;

  const Catalog twice = filter_catalog(kept, f);
  ASSERT_EQ(twice.events.size(), kept.events.size());
  for (std::size_t i = 0; i < kept.events.size(); ++i)
    EXPECT_TRUE(same_fields(twice.events[i], kept.events[i]));
}

TEST(FilterCatalog, FiveEventSyntheticExample) {
  Catalog cat;
  cat.events = {make_test_event(make_time(2005, 1, 1, 0, 0), 2.5),
                make_test_event(make_time(2005, 1, 2, 0, 0), 2.8),
                make_test_event(make_time(2005, 1, 3, 0, 0), 2.7),
                make_test_event(make_time(2005, 1, 4, 0, 0), 3.2),
                make_test_event(make_time(2005, 1, 5, 0, 0), 4.0)};
  EXPECT_EQ(filter_catalog(cat, {.cutoff_magnitude = 2.8}).events.size(), 3u);
}

TEST(CatalogRoundTrip, DatSerializeReparse) {
  const Catalog cat = parse_str(
      "29.35 37.12 2005 6 14 3.4 7.0 12 45 0.0\n"
      "28.991 37.505 2006 1 2 3.15 5.25 8 30 12.5\n"
      "29.0125 36.8 2006 12 31 4.05 11.1 23 59 0.0\n");
  std::ostringstream out;
  write_catalog_dat(cat, out);
  const Catalog again = parse_str(out.str());
  ASSERT_EQ(again.events.size(), cat.events.size());
  for (std::size_t i = 0; i < cat.events.size(); ++i)
    EXPECT_TRUE(same_fields(cat.events[i], again.events[i])) << "row " << i;
  std::ostringstream out2;
  write_catalog_dat(again, out2);
  EXPECT_EQ(out.str(), out2.str());
}

TEST(CatalogRoundTrip, CsvWriteRead) {
  const Catalog cat = parse_str(
      "29.35 37.12 2005 6 14 3.4 7.0 12 45 0.0\n"
      "28.991 37.505 2006 1 2 3.15 5.25 8 30 12.5\n");
  std::ostringstream out;
  write_catalog_csv(cat, out);
  std::istringstream in(out.str());
  const Catalog again = read_catalog_csv(in);
  ASSERT_EQ(again.events.size(), cat.events.size());
  for (std::size_t i = 0; i < cat.events.size(); ++i)
    EXPECT_TRUE(same_fields(cat.events[i], again.events[i])) << "row " << i;
}

TEST(CatalogCsv, RejectsMissingOrWrongHeader) {
  std::istringstream no_header("29.35,37.12,2005-06-14T12:45Z,3.4,7.0,0\n");
  EXPECT_THROW(read_catalog_csv(no_header), ParseError);
  std::istringstream bad_header("lon,lat,when,mag,depth,dur\n");
  EXPECT_THROW(read_catalog_csv(bad_header), ParseError);
}

TEST(CatalogCsv, RejectsWrongFieldCount) {
  std::istringstream in(std::string(kCatalogCsvHeader) + "\n29.35,37.12,2005-06-14T12:45Z,3.4\n");
  EXPECT_THROW(read_catalog_csv(in), ParseError);
}

TEST(TimeHandling, FormatAndParseRoundTrip) {
  const TimePoint t = make_time(2013, 12, 28, 23, 59);
  EXPECT_EQ(format_time(t), "2013-12-28T23:59Z");
  EXPECT_EQ(parse_time("2013-12-28T23:59Z"), t);
  EXPECT_EQ(parse_time("2013-12-28T23:59"), t);
  EXPECT_THROW(parse_time("2013-12-28"), ParseError);
  EXPECT_THROW(parse_time("2013-12-28T23:59:00Z"), ParseError);
}

TEST(TimeHandling, DateOnlyExpandsToDayBounds) {
  EXPECT_EQ(parse_time_or_date("2010-10-31", false, "t"), make_time(2010, 10, 31, 0, 0));
  EXPECT_EQ(parse_time_or_date("2010-10-31", true, "t"), make_time(2010, 10, 31, 23, 59));
  EXPECT_EQ(parse_time_or_date("2010-10-31T07:15Z", true, "t"), make_time(2010, 10, 31, 7, 15));
}

TEST(TimeHandling, LeapDayIsValid) {
  EXPECT_EQ(format_time(make_time(2012, 2, 29, 0, 0)), "2012-02-29T00:00Z");
  EXPECT_THROW(make_time(2013, 2, 29, 0, 0), ValidationError);
}

}  // namespace
}  // namespace quakeb
