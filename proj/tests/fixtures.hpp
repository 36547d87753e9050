#pragma once

// Synthetic vessel tracks for the tests. Positions are generated with the
// spherical direct (destination-point) formula, which the library itself
// does not use, so the fixtures stay independent of the code under test.

#include "synopses/ais_ingest.hpp"
#include "synopses/geo_kinematics.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace fixtures {

using synopses::AisRecord;
using synopses::Dataset;
using synopses::GeoPoint;
using synopses::VesselTrack;

inline constexpr double kRadiusM = 6'371'000.0;
inline constexpr double kKnot = 0.514444;
inline constexpr GeoPoint kBrest{-4.49, 48.38};
inline constexpr std::int64_t kT0 = 1'443'650'400;

inline GeoPoint destination(GeoPoint from, double bearing_deg, double distance_m) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double d = distance_m / kRadiusM;
  const double phi1 = from.lat * rad;
  const double lam1 = from.lon * rad;
  const double theta = bearing_deg * rad;
  const double phi2 =
      std::asin(std::sin(phi1) * std::cos(d) + std::cos(phi1) * std::sin(d) * std::cos(theta));
  const double lam2 = lam1 + std::atan2(std::sin(theta) * std::sin(d) * std::cos(phi1),
                                        std::cos(d) - std::sin(phi1) * std::sin(phi2));
  return {lam2 / rad, phi2 / rad};
}

class TrackBuilder {
public:
  explicit TrackBuilder(std::uint64_t mmsi, std::string type = "unknown",
                        GeoPoint start = kBrest, std::int64_t t0 = kT0)
      : mmsi_(mmsi), type_(std::move(type)), pos_(start), t_(t0) {
    emit();
  }

  /// `steps` new points, each dt seconds and speed*dt meters further along `heading`.
  TrackBuilder& sail(int steps, double heading_deg, double speed_kn, std::int64_t dt = 60) {
    for (int i = 0; i < steps; ++i) {
      pos_ = destination(pos_, heading_deg, speed_kn * kKnot * static_cast<double>(dt));
      t_ += dt;
      emit();
    }
    return *this;
  }

  /// Speed changing linearly from `from_kn` to `to_kn` over `steps` points.
  TrackBuilder& ramp(int steps, double heading_deg, double from_kn, double to_kn,
                     std::int64_t dt = 60) {
    for (int i = 1; i <= steps; ++i) {
      const double v = from_kn + (to_kn - from_kn) * i / steps;
      sail(1, heading_deg, v, dt);
    }
    return *this;
  }

  /// Heading changing by `turn_deg` per point.
  TrackBuilder& curve(int steps, double heading_deg, double turn_deg, double speed_kn,
                      std::int64_t dt = 60) {
    for (int i = 1; i <= steps; ++i) {
      sail(1, heading_deg + turn_deg * i, speed_kn, dt);
    }
    return *this;
  }

  /// `steps` points scattered 3-5 m around the current position.
  TrackBuilder& jitter(int steps, std::int64_t dt = 60) {
    const GeoPoint centre = pos_;
    for (int i = 0; i < steps; ++i) {
      const double bearing = std::fmod(37.0 + 137.0 * i, 360.0);
      const double dist = 3.0 + (i % 3);
      pos_ = destination(centre, bearing, dist);
      t_ += dt;
      emit();
    }
    return *this;
  }

  /// Silence of `dt` seconds, then one point `speed_kn * dt` further along.
  TrackBuilder& silence(std::int64_t dt, double heading_deg, double speed_kn) {
    return sail(1, heading_deg, speed_kn, dt);
  }

  VesselTrack build() const { return {mmsi_, type_, points_}; }

private:
  void emit() { points_.push_back({mmsi_, t_, pos_.lon, pos_.lat, type_}); }

  std::uint64_t mmsi_;
  std::string type_;
  GeoPoint pos_;
  std::int64_t t_;
  std::vector<AisRecord> points_;
};

inline constexpr double kEast = 90.0;
inline constexpr double kNorth = 0.0;

/// 10 knots due east, one point a minute.
inline VesselTrack straight_track(int points = 20, std::uint64_t mmsi = 1) {
  return TrackBuilder(mmsi).sail(points - 1, kEast, 10.0).build();
}

/// Points 0..9 east, 10..19 north, constant 10 knots; the corner is point 9.
inline VesselTrack corner_track(std::uint64_t mmsi = 2) {
  return TrackBuilder(mmsi).sail(9, kEast, 10.0).sail(10, kNorth, 10.0).build();
}

/// Sails points 0..4, sits within 5 m for points 5..15, departs 16..19.
inline VesselTrack stop_track(std::uint64_t mmsi = 3) {
  return TrackBuilder(mmsi).sail(4, kEast, 10.0).jitter(11).sail(4, kEast, 10.0).build();
}

/// Points 0..9, a 2000 s silence before point 10, then points 11..19.
inline VesselTrack gap_track(std::uint64_t mmsi = 4) {
  return TrackBuilder(mmsi).sail(9, kEast, 10.0).silence(2000, kEast, 10.0).sail(9, kEast, 10.0).build();
}

/// Heading turning 3 degrees per point for 30 points.
inline VesselTrack smooth_curve_track(std::uint64_t mmsi = 7) {
  return TrackBuilder(mmsi).sail(5, kEast, 10.0).curve(30, kEast, 3.0, 10.0).build();
}

/// 500 points over seven vessels covering stops, slow motion, turns, speed
/// changes and gaps.
inline Dataset mixed_dataset() {
  Dataset d;
  d.push_back(TrackBuilder(101).sail(59, kEast, 12.0).build());
  d.push_back(TrackBuilder(102)
                  .sail(19, kEast, 10.0)
                  .sail(20, kNorth, 10.0)
                  .sail(20, 135.0, 10.0)
                  .sail(20, kEast, 10.0)
                  .build());
  d.push_back(TrackBuilder(103).sail(20, kEast, 10.0).jitter(30).sail(29, kNorth, 10.0).build());
  d.push_back(TrackBuilder(104)
                  .sail(19, kEast, 10.0)
                  .silence(2400, kEast, 10.0)
                  .sail(19, kEast, 10.0)
                  .silence(3000, kEast, 10.0)
                  .sail(19, kEast, 10.0)
                  .build());
  d.push_back(TrackBuilder(105).sail(19, kEast, 10.0).sail(30, kEast, 3.0).sail(30, kEast, 10.0).build());
  d.push_back(TrackBuilder(106)
                  .sail(19, kEast, 8.0)
                  .ramp(10, kEast, 8.0, 16.0)
                  .sail(20, kEast, 16.0)
                  .ramp(10, kEast, 16.0, 8.0)
                  .sail(20, kEast, 8.0)
                  .build());
  d.push_back(TrackBuilder(107).sail(9, kEast, 10.0).curve(30, kEast, 3.0, 10.0).sail(20, 180.0, 10.0).build());
  return d;
}

} // namespace fixtures
