#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synopses {

/// One decoded AIS positional report.
struct AisRecord {
  std::uint64_t mmsi = 0;
  std::int64_t timestamp = 0; // seconds since Unix epoch
  double lon = 0.0;
  double lat = 0.0;
  std::string vessel_type = "unknown";

  friend bool operator==(const AisRecord&, const AisRecord&) = default;
};

/// Chronological stream of reports for a single vessel.
struct VesselTrack {
  std::uint64_t mmsi = 0;
  std::string vessel_type = "unknown";
  std::vector<AisRecord> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  friend bool operator==(const VesselTrack&, const VesselTrack&) = default;
};

using Dataset = std::vector<VesselTrack>;

/// Which columns hold which field. Indices are used for header-less input;
/// when a header row is present the columns are resolved by name instead.
struct ColumnMapping {
  int mmsi = 0;
  int timestamp = 1;
  int lon = 2;
  int lat = 3;
  std::optional<int> vessel_type = 4;
};

struct RowError {
  std::size_t line = 0; // 1-based line number in the input
  std::string reason;
};

struct ParseReport {
  std::size_t rows = 0;     // data rows seen (header excluded)
  std::size_t accepted = 0; // rows that produced a record
  std::vector<RowError> errors;

  std::size_t rejected() const { return errors.size(); }
};

struct ParseResult {
  std::vector<AisRecord> records;
  ParseReport report;
};

/// Parses comma-separated AIS rows. A first row whose mmsi field is not
/// numeric is treated as a header and columns are looked up by name
/// (mmsi/sourcemmsi, timestamp/t/ts, lon/longitude, lat/latitude,
/// type/vessel_type/shiptype). Throws DataError if the header lacks a
/// mandatory column; malformed rows are tallied in the report.
ParseResult parse_records(std::istream& in, const ColumnMapping& mapping = {});

/// Opens and parses a file. Throws DataError when the file is unreadable.
ParseResult parse_file(const std::filesystem::path& path, const ColumnMapping& mapping = {});

/// Normalizes a free-form vessel-type label: trimmed, lowercase, empty -> "unknown".
std::string normalize_vessel_type(std::string_view label);

/// Groups records into one track per mmsi (ascending mmsi), sorted by time,
/// keeping only the first record for any repeated (mmsi, timestamp).
Dataset partition_tracks(const std::vector<AisRecord>& records);

/// Flattens a dataset back into its records in track order.
std::vector<AisRecord> flatten(const Dataset& tracks);

std::size_t count_points(const Dataset& tracks);

/// Assigns whole tracks to k folds, longest track first, each going to the
/// fold with the fewest points so far. Throws std::invalid_argument if
/// k < 2 or k exceeds the number of tracks.
std::vector<Dataset> split_k_folds(const Dataset& tracks, std::size_t k);

/// Tracks whose vessel_type equals `type` (after normalization).
Dataset filter_by_type(const Dataset& tracks, std::string_view type);

/// Distinct vessel types present, sorted.
std::vector<std::string> vessel_types(const Dataset& tracks);

/// Writes records as "mmsi,timestamp,lon,lat,type" with a header row.
void write_records_csv(std::ostream& out, const std::vector<AisRecord>& records);

} // namespace synopses
