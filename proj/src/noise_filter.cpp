#include "synopses/noise_filter.hpp"

#include "synopses/error.hpp"
#include "synopses/geo_kinematics.hpp"

#include <cmath>

namespace synopses {

void NoiseFilterConfig::validate() const {
  if (!(max_speed_knots > 0.0)) {
    throw ConfigError("noise filter: max_speed_knots must be positive");
  }
  if (!(max_coord_jump_deg > 0.0)) {
    throw ConfigError("noise filter: max_coord_jump_deg must be positive");
  }
  if (region && (region->min_lon >= region->max_lon || region->min_lat >= region->max_lat)) {
    throw ConfigError("noise filter: bounding region is empty");
  }
}

namespace {

bool is_noise(const AisRecord& p, const AisRecord* last, const NoiseFilterConfig& cfg) {
  if (cfg.region && !cfg.region->contains(p.lon, p.lat)) {
    return true;
  }
  if (last == nullptr) {
    return false;
  }
  if (p.timestamp <= last->timestamp) {
    return true;
  }
  const auto dt = p.timestamp - last->timestamp;
  const double speed_kn =
      haversine_m(position_of(*last), position_of(p)) / static_cast<double>(dt) / kKnotMps;
  if (speed_kn > cfg.max_speed_knots) {
    return true;
  }
  if (dt < kJumpWindowS && (std::abs(p.lon - last->lon) > cfg.max_coord_jump_deg ||
                            std::abs(p.lat - last->lat) > cfg.max_coord_jump_deg)) {
    return true;
  }
  return false;
}

} // namespace

FilterResult filter_track(const VesselTrack& track, const NoiseFilterConfig& cfg) {
  FilterResult result;
  result.clean.mmsi = track.mmsi;
  result.clean.vessel_type = track.vessel_type;
  result.clean.points.reserve(track.size());

  auto& kept = result.clean.points;
  for (const auto& p : track.points) {
    if (is_noise(p, kept.empty() ? nullptr : &kept.back(), cfg)) {
      ++result.rejected;
      continue;
    }
    kept.push_back(p);
  }
  return result;
}

Dataset filter_dataset(const Dataset& tracks, const NoiseFilterConfig& cfg,
                       std::size_t* rejected_total) {
  Dataset out;
  out.reserve(tracks.size());
  std::size_t rejected = 0;
  for (const auto& t : tracks) {
    auto r = filter_track(t, cfg);
    rejected += r.rejected;
    if (!r.clean.empty()) {
      out.push_back(std::move(r.clean));
    }
  }
  if (rejected_total != nullptr) {
    *rejected_total = rejected;
  }
  return out;
}

} // namespace synopses
