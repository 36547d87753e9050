#include "doctest.h"

#include "fixtures.hpp"
#include "synopses/ais_ingest.hpp"
#include "synopses/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace synopses;

namespace {

ParseResult parse(const std::string& text) {
  std::istringstream in(text);
  return parse_records(in);
}

AisRecord rec(std::uint64_t mmsi, std::int64_t t, double lon = 0.0, double lat = 0.0) {
  return {mmsi, t, lon, lat, "unknown"};
}

std::vector<AisRecord> sorted_records(std::vector<AisRecord> v) {
  std::sort(v.begin(), v.end(), [](const AisRecord& a, const AisRecord& b) {
    return std::tie(a.mmsi, a.timestamp) < std::tie(b.mmsi, b.timestamp);
  });
  return v;
}

} // namespace

TEST_CASE("parse: one Brest row maps field by field") {
  const auto out = parse("227705102,1443650402,-4.4861,48.3904,passenger\n");
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0] == AisRecord{227705102, 1443650402, -4.4861, 48.3904, "passenger"});
  CHECK(out.report.rows == 1);
  CHECK(out.report.accepted == 1);
  CHECK(out.report.rejected() == 0);
}

TEST_CASE("parse: latitude 91 is rejected and tallied") {
  const auto out = parse("1,100,0.0,45.0\n1,160,0.0,91.0\n1,220,0.0,45.1\n");
  CHECK(out.records.size() == 2);
  REQUIRE(out.report.rejected() == 1);
  CHECK(out.report.errors[0].line == 2);
}

TEST_CASE("parse: empty input") {
  const auto out = parse("");
  CHECK(out.records.empty());
  CHECK(out.report.rows == 0);
  CHECK(out.report.rejected() == 0);
}

TEST_CASE("parse: malformed rows do not stop the stream") {
  const auto out = parse("1,100,0,0\nnot,a,row\n1,abc,0,0\n1,200\n1,-5,0,0\n1,300,181,0\n1,400,1,1\n");
  CHECK(out.records.size() == 2);
  CHECK(out.report.rows == 7);
  CHECK(out.report.rejected() == 5);
}

TEST_CASE("parse: header resolves columns by name") {
  const auto out = parse("t,lat,lon,sourcemmsi,shiptype\n1443650402,48.39,-4.48,227705102,Fishing \n");
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0] == AisRecord{227705102, 1443650402, -4.48, 48.39, "fishing"});
  CHECK(out.report.rows == 1);
}

TEST_CASE("parse: header without a mandatory column is fatal") {
  CHECK_THROWS_AS(parse("mmsi,timestamp,lon\n1,2,3\n"), DataError);
}

TEST_CASE("parse: missing type column defaults to unknown") {
  const auto out = parse("5,10,1.5,2.5\n");
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].vessel_type == "unknown");
}

TEST_CASE("parse: custom column mapping") {
  ColumnMapping m{3, 2, 1, 0, std::nullopt};
  std::istringstream row("48.5,-4.5,1000,42\n");
  const auto out = parse_records(row, m);
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0] == AisRecord{42, 1000, -4.5, 48.5, "unknown"});
}

TEST_CASE("parse_file: missing file") {
  CHECK_THROWS_AS(parse_file("/nonexistent/ais.csv"), DataError);
}

TEST_CASE("partition: grouping by vessel") {
  const std::vector<AisRecord> recs{rec(7, 1), rec(9, 1), rec(7, 2), rec(9, 2), rec(7, 3)};
  const auto tracks = partition_tracks(recs);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].mmsi == 7);
  CHECK(tracks[0].size() == 3);
  CHECK(tracks[1].mmsi == 9);
  CHECK(tracks[1].size() == 2);
}

TEST_CASE("partition: out of order records are sorted") {
  const auto tracks = partition_tracks({rec(1, 30), rec(1, 10), rec(1, 20)});
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].points[0].timestamp == 10);
  CHECK(tracks[0].points[1].timestamp == 20);
  CHECK(tracks[0].points[2].timestamp == 30);
}

TEST_CASE("partition: duplicate (mmsi, timestamp) keeps one point") {
  const auto tracks = partition_tracks({rec(1, 10, 1.0), rec(1, 10, 2.0), rec(1, 20)});
  REQUIRE(tracks.size() == 1);
  REQUIRE(tracks[0].size() == 2);
  CHECK(tracks[0].points[0].lon == 1.0);
}

TEST_CASE("partition: type label is the first known one") {
  std::vector<AisRecord> recs{rec(1, 10), rec(1, 20), rec(1, 30)};
  recs[1].vessel_type = "tug";
  const auto tracks = partition_tracks(recs);
  CHECK(tracks[0].vessel_type == "tug");
}

TEST_CASE("property: partition is idempotent and tracks are strictly increasing") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> mmsi(1, 12);
  std::uniform_int_distribution<int> t(0, 200);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AisRecord> recs;
    for (int i = 0; i < 300; ++i) {
      recs.push_back(rec(mmsi(rng), t(rng), 0.001 * i, 0.0));
    }
    const auto once = partition_tracks(recs);
    const auto twice = partition_tracks(flatten(once));
    CHECK(once == twice);
    for (const auto& tr : once) {
      for (std::size_t i = 1; i < tr.size(); ++i) {
        REQUIRE(tr.points[i - 1].timestamp < tr.points[i].timestamp);
        REQUIRE(tr.points[i].mmsi == tr.mmsi);
      }
    }
  }
}

TEST_CASE("folds: six equal tracks, k=6 gives one per fold") {
  Dataset d;
  for (std::uint64_t i = 1; i <= 6; ++i) {
    d.push_back(fixtures::straight_track(10, i));
  }
  const auto folds = split_k_folds(d, 6);
  REQUIRE(folds.size() == 6);
  for (const auto& f : folds) {
    CHECK(f.size() == 1);
  }
}

TEST_CASE("folds: k larger than the track count or below 2 is an error") {
  Dataset d;
  for (std::uint64_t i = 1; i <= 6; ++i) {
    d.push_back(fixtures::straight_track(10, i));
  }
  CHECK_THROWS_AS(split_k_folds(d, 7), std::invalid_argument);
  CHECK_THROWS_AS(split_k_folds(d, 1), std::invalid_argument);
}

TEST_CASE("folds: 600 points over uneven tracks balance within one max track") {
  const std::vector<int> lengths{120, 90, 80, 70, 60, 50, 40, 30, 25, 20, 15};
  Dataset d;
  std::uint64_t id = 1;
  std::size_t max_len = 0;
  for (int len : lengths) {
    d.push_back(fixtures::straight_track(len, id++));
    max_len = std::max<std::size_t>(max_len, len);
  }
  REQUIRE(count_points(d) == 600);
  const auto folds = split_k_folds(d, 6);
  for (const auto& f : folds) {
    const auto n = static_cast<double>(count_points(f));
    CHECK(std::abs(n - 100.0) <= static_cast<double>(max_len));
  }
}

TEST_CASE("property: folds preserve the multiset of points") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 60);
  for (int trial = 0; trial < 30; ++trial) {
    Dataset d;
    const int tracks = 2 + trial % 10;
    for (int i = 0; i < tracks; ++i) {
      d.push_back(fixtures::straight_track(len(rng), 1000 + i));
    }
    const std::size_t k = 2 + static_cast<std::size_t>(trial) % (tracks - 1);
    const auto folds = split_k_folds(d, k);
    REQUIRE(folds.size() == k);
    std::vector<AisRecord> joined;
    std::size_t longest = 0;
    for (const auto& t : d) {
      longest = std::max(longest, t.size());
    }
    for (const auto& f : folds) {
      const auto pts = flatten(f);
      joined.insert(joined.end(), pts.begin(), pts.end());
      CHECK(static_cast<double>(count_points(f)) <=
            static_cast<double>(count_points(d)) / static_cast<double>(k) + longest);
    }
    CHECK(sorted_records(joined) == sorted_records(flatten(d)));
  }
}

TEST_CASE("filter_by_type and vessel_types") {
  Dataset d{fixtures::TrackBuilder(1, "tug").sail(3, 90, 5).build(),
            fixtures::TrackBuilder(2, "cargo").sail(3, 90, 5).build(),
            fixtures::TrackBuilder(3, "tug").sail(3, 90, 5).build()};
  CHECK(filter_by_type(d, "tug").size() == 2);
  CHECK(filter_by_type(d, "Tug").size() == 2);
  CHECK(vessel_types(d) == std::vector<std::string>{"cargo", "tug"});
}

TEST_CASE("write_records_csv round trips through parse_records") {
  const auto track = fixtures::corner_track();
  std::ostringstream out;
  write_records_csv(out, track.points);
  std::istringstream in(out.str());
  const auto back = parse_records(in);
  REQUIRE(back.records.size() == track.size());
  for (std::size_t i = 0; i < track.size(); ++i) {
    CHECK(back.records[i].timestamp == track.points[i].timestamp);
    CHECK(std::abs(back.records[i].lon - track.points[i].lon) <= 5e-7);
    CHECK(std::abs(back.records[i].lat - track.points[i].lat) <= 5e-7);
  }
}
