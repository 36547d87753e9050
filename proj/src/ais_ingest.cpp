#include "synopses/ais_ingest.hpp"

#include "synopses/error.hpp"
#include "synopses/format.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace synopses {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) {
    return false;
  }
  if (text.front() == '+') {
    text.remove_prefix(1);
  }
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

enum Column : std::size_t { kMmsi, kTime, kLon, kLat, kType, kColumnCount };

// Accepted header names per column, lowercase.
const std::array<std::vector<std::string_view>, kColumnCount> kAliases = {{
    {"mmsi", "sourcemmsi"},
    {"timestamp", "t", "ts", "time"},
    {"lon", "longitude"},
    {"lat", "latitude"},
    {"type", "vessel_type", "shiptype", "ship_type"},
}};

constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "mmsi", "timestamp", "lon", "lat", "vessel_type"};

bool looks_like_header(const std::vector<std::string_view>& fields) {
  for (auto f : fields) {
    const auto name = lowercase(f);
    for (const auto& aliases : kAliases) {
      if (std::find(aliases.begin(), aliases.end(), name) != aliases.end()) {
        return true;
      }
    }
  }
  return false;
}

struct ResolvedColumns {
  std::array<int, kColumnCount> index{};
};

ResolvedColumns resolve_from_header(const std::vector<std::string_view>& fields) {
  ResolvedColumns cols;
  cols.index.fill(-1);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto name = lowercase(fields[i]);
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      const auto& aliases = kAliases[c];
      if (cols.index[c] < 0 && std::find(aliases.begin(), aliases.end(), name) != aliases.end()) {
        cols.index[c] = static_cast<int>(i);
      }
    }
  }
  for (std::size_t c = 0; c < kType; ++c) {
    if (cols.index[c] < 0) {
      throw DataError("input header is missing mandatory column '" + std::string(kColumnNames[c]) +
                      "'");
    }
  }
  return cols;
}

ResolvedColumns resolve_from_mapping(const ColumnMapping& m) {
  ResolvedColumns cols;
  cols.index = {m.mmsi, m.timestamp, m.lon, m.lat, m.vessel_type.value_or(-1)};
  for (std::size_t c = 0; c < kType; ++c) {
    if (cols.index[c] < 0) {
      throw std::invalid_argument("column mapping has a negative index for '" +
                                  std::string(kColumnNames[c]) + "'");
    }
  }
  return cols;
}

// Returns an empty string on success, otherwise the rejection reason.
std::string parse_row(const std::vector<std::string_view>& fields, const ResolvedColumns& cols,
                      AisRecord& rec) {
  int needed = 0;
  for (std::size_t c = 0; c < kType; ++c) {
    needed = std::max(needed, cols.index[c] + 1);
  }
  if (static_cast<int>(fields.size()) < needed) {
    return "expected at least " + std::to_string(needed) + " fields, got " +
           std::to_string(fields.size());
  }
  if (!parse_number(fields[cols.index[kMmsi]], rec.mmsi)) {
    return "invalid mmsi";
  }
  if (!parse_number(fields[cols.index[kTime]], rec.timestamp) || rec.timestamp < 0) {
    return "invalid timestamp";
  }
  if (!parse_number(fields[cols.index[kLon]], rec.lon) || !std::isfinite(rec.lon)) {
    return "invalid longitude";
  }
  if (!parse_number(fields[cols.index[kLat]], rec.lat) || !std::isfinite(rec.lat)) {
    return "invalid latitude";
  }
  if (rec.lon < -180.0 || rec.lon > 180.0) {
    return "longitude out of range";
  }
  if (rec.lat < -90.0 || rec.lat > 90.0) {
    return "latitude out of range";
  }
  const int type_col = cols.index[kType];
  if (type_col >= 0 && type_col < static_cast<int>(fields.size())) {
    rec.vessel_type = normalize_vessel_type(fields[type_col]);
  } else {
    rec.vessel_type = "unknown";
  }
  return {};
}

} // namespace

std::string normalize_vessel_type(std::string_view label) {
  auto t = lowercase(trim(label));
  return t.empty() ? std::string("unknown") : t;
}

ParseResult parse_records(std::istream& in, const ColumnMapping& mapping) {
  ParseResult result;
  std::optional<ResolvedColumns> cols;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      if (looks_like_header(fields)) {
        cols = resolve_from_header(fields);
        continue;
      }
      cols = resolve_from_mapping(mapping);
    }
    ++result.report.rows;
    AisRecord rec;
    if (auto reason = parse_row(fields, *cols, rec); !reason.empty()) {
      result.report.errors.push_back({line_no, std::move(reason)});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (in.bad()) {
    throw DataError("read error after line " + std::to_string(line_no));
  }
  result.report.accepted = result.records.size();
  return result;
}

ParseResult parse_file(const std::filesystem::path& path, const ColumnMapping& mapping) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open input file '" + path.string() + "'");
  }
  return parse_records(in, mapping);
}

Dataset partition_tracks(const std::vector<AisRecord>& records) {
  std::map<std::uint64_t, VesselTrack> by_vessel;
  for (const auto& rec : records) {
    auto& track = by_vessel[rec.mmsi];
    track.mmsi = rec.mmsi;
    track.points.push_back(rec);
  }

  Dataset tracks;
  tracks.reserve(by_vessel.size());
  for (auto& [mmsi, track] : by_vessel) {
    auto& pts = track.points;
    std::stable_sort(pts.begin(), pts.end(), [](const AisRecord& a, const AisRecord& b) {
      return a.timestamp < b.timestamp;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const AisRecord& a, const AisRecord& b) {
                            return a.timestamp == b.timestamp;
                          }),
              pts.end());
    const auto typed = std::find_if(pts.begin(), pts.end(), [](const AisRecord& r) {
      return r.vessel_type != "unknown";
    });
    track.vessel_type = typed != pts.end() ? typed->vessel_type : "unknown";
    tracks.push_back(std::move(track));
  }
  return tracks;
}

std::vector<AisRecord> flatten(const Dataset& tracks) {
  std::vector<AisRecord> out;
  out.reserve(count_points(tracks));
  for (const auto& t : tracks) {
    out.insert(out.end(), t.points.begin(), t.points.end());
  }
  return out;
}

std::size_t count_points(const Dataset& tracks) {
  return std::accumulate(tracks.begin(), tracks.end(), std::size_t{0},
                         [](std::size_t acc, const VesselTrack& t) { return acc + t.size(); });
}

std::vector<Dataset> split_k_folds(const Dataset& tracks, std::size_t k) {
  if (k < 2) {
    throw std::invalid_argument("fold count must be at least 2");
  }
  if (k > tracks.size()) {
    throw std::invalid_argument("fold count " + std::to_string(k) + " exceeds track count " +
                                std::to_string(tracks.size()));
  }

  std::vector<std::size_t> order(tracks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tracks[a].size() > tracks[b].size();
  });

  std::vector<Dataset> folds(k);
  std::vector<std::size_t> load(k, 0);
  for (auto idx : order) {
    const auto target = static_cast<std::size_t>(
        std::distance(load.begin(), std::min_element(load.begin(), load.end())));
    folds[target].push_back(tracks[idx]);
    load[target] += tracks[idx].size();
  }
  // keep each fold in input order so downstream output does not depend on sizes
  for (auto& fold : folds) {
    std::stable_sort(fold.begin(), fold.end(),
                     [](const VesselTrack& a, const VesselTrack& b) { return a.mmsi < b.mmsi; });
  }
  return folds;
}

Dataset filter_by_type(const Dataset& tracks, std::string_view type) {
  const auto wanted = normalize_vessel_type(type);
  Dataset out;
  std::copy_if(tracks.begin(), tracks.end(), std::back_inserter(out),
               [&](const VesselTrack& t) { return t.vessel_type == wanted; });
  return out;
}

std::vector<std::string> vessel_types(const Dataset& tracks) {
  std::set<std::string> types;
  for (const auto& t : tracks) {
    types.insert(t.vessel_type);
  }
  return {types.begin(), types.end()};
}

void write_records_csv(std::ostream& out, const std::vector<AisRecord>& records) {
  out << "mmsi,timestamp,lon,lat,type\n";
  for (const auto& r : records) {
    out << r.mmsi << ',' << r.timestamp << ',' << fixed(r.lon) << ',' << fixed(r.lat) << ','
        << r.vessel_type << '\n';
  }
}

} // namespace synopses
