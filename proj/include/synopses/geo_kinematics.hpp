#pragma once

#include "synopses/ais_ingest.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace synopses {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kKnotMps = 0.514444; // 1852 m / 3600 s, as used throughout

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline GeoPoint position_of(const AisRecord& r) { return {r.lon, r.lat}; }

/// Position at a given time; the knots of a reconstructed course.
struct TimedPosition {
  std::int64_t timestamp = 0;
  GeoPoint pos;
};

struct Velocity {
  double speed_knots = 0.0;
  double heading_deg = 0.0; // [0, 360), 0 = north, 90 = east
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(GeoPoint a, GeoPoint b);

/// Initial great-circle bearing from a to b in [0, 360). Undefined (returns 0)
/// for coincident points; callers guard.
double bearing_deg(GeoPoint a, GeoPoint b);

/// Normalizes any angle to [0, 360).
double normalize_heading(double deg);

/// Signed smallest rotation from `from` to `to`, in (-180, 180].
double heading_difference(double from_deg, double to_deg);

/// Speed and heading of the move a -> b. When the points coincide the speed
/// is 0 and the heading is `fallback_heading_deg`. Throws
/// std::invalid_argument unless b is strictly later than a.
Velocity segment_velocity(const AisRecord& a, const AisRecord& b,
                          double fallback_heading_deg = 0.0);

/// Vector average of the per-segment velocities over the points of `buffer`
/// that are no older than now - timespan_s. Absent when fewer than two
/// points remain.
std::optional<Velocity> mean_velocity(std::span<const AisRecord> buffer, double timespan_s,
                                      std::int64_t now);

/// Linear interpolation in lon and lat against time. Exact at both ends.
/// Throws std::invalid_argument if a.timestamp >= b.timestamp or tau lies
/// outside [a.timestamp, b.timestamp].
GeoPoint interpolate(const TimedPosition& a, const TimedPosition& b, double tau);

} // namespace synopses
