#include "synopses/geo_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace synopses {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

} // namespace

double haversine_m(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) {
    h += 360.0;
  }
  // fmod of a tiny negative can round up to exactly 360
  return h >= 360.0 ? 0.0 : h;
}

double heading_difference(double from_deg, double to_deg) {
  double d = std::fmod(to_deg - from_deg, 360.0);
  if (d <= -180.0) {
    d += 360.0;
  } else if (d > 180.0) {
    d -= 360.0;
  }
  return d;
}

double bearing_deg(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  return normalize_heading(std::atan2(y, x) * kRadToDeg);
}

Velocity segment_velocity(const AisRecord& a, const AisRecord& b, double fallback_heading_deg) {
  if (b.timestamp <= a.timestamp) {
    throw std::invalid_argument("segment_velocity: timestamps must increase (" +
                                std::to_string(a.timestamp) + " -> " +
                                std::to_string(b.timestamp) + ")");
  }
  const auto pa = position_of(a);
  const auto pb = position_of(b);
  const double dist = haversine_m(pa, pb);
  if (dist == 0.0) {
    return {0.0, normalize_heading(fallback_heading_deg)};
  }
  const double dt = static_cast<double>(b.timestamp - a.timestamp);
  return {dist / dt / kKnotMps, bearing_deg(pa, pb)};
}

std::optional<Velocity> mean_velocity(std::span<const AisRecord> buffer, double timespan_s,
                                      std::int64_t now) {
  const double horizon = static_cast<double>(now) - timespan_s;
  const auto first = std::find_if(buffer.begin(), buffer.end(), [&](const AisRecord& r) {
    return static_cast<double>(r.timestamp) >= horizon;
  });
  const auto window = std::span<const AisRecord>(first, buffer.end());
  if (window.size() < 2) {
    return std::nullopt;
  }

  double east = 0.0;
  double north = 0.0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    const auto v = segment_velocity(window[i - 1], window[i]);
    east += v.speed_knots * std::sin(v.heading_deg * kDegToRad);
    north += v.speed_knots * std::cos(v.heading_deg * kDegToRad);
  }
  const auto segments = static_cast<double>(window.size() - 1);
  east /= segments;
  north /= segments;

  Velocity mean;
  mean.speed_knots = std::hypot(east, north);
  mean.heading_deg = mean.speed_knots > 0.0 ? normalize_heading(std::atan2(east, north) * kRadToDeg) : 0.0;
  return mean;
}

GeoPoint interpolate(const TimedPosition& a, const TimedPosition& b, double tau) {
  if (a.timestamp >= b.timestamp) {
    throw std::invalid_argument("interpolate: knots must have increasing timestamps");
  }
  const auto t1 = static_cast<double>(a.timestamp);
  const auto t2 = static_cast<double>(b.timestamp);
  if (tau < t1 || tau > t2) {
    throw std::invalid_argument("interpolate: time " + std::to_string(tau) +
                                " outside knot interval");
  }
  const double f = (tau - t1) / (t2 - t1);
  // the (1-f)/f weighting is exact at f == 0 and f == 1
  return {a.pos.lon * (1.0 - f) + b.pos.lon * f, a.pos.lat * (1.0 - f) + b.pos.lat * f};
}

} // namespace synopses
