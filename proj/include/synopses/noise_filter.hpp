#pragma once

#include "synopses/ais_ingest.hpp"

#include <cstddef>
#include <limits>
#include <optional>

namespace synopses {

struct BoundingRegion {
  double min_lon = -180.0;
  double min_lat = -90.0;
  double max_lon = 180.0;
  double max_lat = 90.0;

  bool contains(double lon, double lat) const {
    return lon >= min_lon && lon <= max_lon && lat >= min_lat && lat <= max_lat;
  }
};

/// Thresholds for the single-pass noise heuristics. Set max_speed_knots or
/// max_coord_jump_deg to infinity to disable that rule.
struct NoiseFilterConfig {
  double max_speed_knots = 50.0;
  double max_coord_jump_deg = 0.5;
  std::optional<BoundingRegion> region;

  static NoiseFilterConfig disabled() {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), {}};
  }

  /// Throws ConfigError unless the thresholds are strictly positive.
  void validate() const;
};

/// Time gaps shorter than this are subject to the coordinate-jump rule.
inline constexpr std::int64_t kJumpWindowS = 10;

struct FilterResult {
  VesselTrack clean;
  std::size_t rejected = 0;
};

/// One pass over a time-sorted track. A point is dropped when it is outside
/// the region, when its time does not advance past the last accepted point,
/// when the implied speed from the last accepted point exceeds the ceiling,
/// or when it jumps more than max_coord_jump_deg in lon or lat within
/// kJumpWindowS seconds. Accepted points keep their order.
FilterResult filter_track(const VesselTrack& track, const NoiseFilterConfig& cfg);

/// Filters every track and drops the ones left empty.
Dataset filter_dataset(const Dataset& tracks, const NoiseFilterConfig& cfg,
                       std::size_t* rejected_total = nullptr);

} // namespace synopses
