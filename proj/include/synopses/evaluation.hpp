#pragma once

#include "synopses/ais_ingest.hpp"
#include "synopses/geo_kinematics.hpp"
#include "synopses/synopses_engine.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace synopses {

struct Metrics {
  double rmse_m = 0.0;
  double ratio = 0.0; // critical_count / noiseless_count
  std::size_t noiseless_count = 0;
  std::size_t critical_count = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Position on the course reconstructed from `synopsis` at time tau:
/// linear between the two bracketing critical points, clamped to the first
/// or last one outside the synopsis time range. Throws
/// std::invalid_argument on an empty synopsis.
GeoPoint synchronized_position(std::span<const CriticalPoint> synopsis, double tau);

/// Sum of squared Haversine errors of one track against its synopsis.
double squared_error_sum(const VesselTrack& clean, std::span<const CriticalPoint> synopsis);

/// RMSE and Ratio aggregated over all points of all vessels. `synopses[i]`
/// belongs to `clean[i]`. Throws std::invalid_argument when the dataset has
/// no points, the sizes disagree or a synopsis is empty for a nonempty track.
Metrics compute_metrics(const Dataset& clean, std::span<const Synopsis> synopses);

/// Compresses every track with `cfg` and scores the result. Tracks are
/// processed on up to `threads` workers; the result does not depend on it.
Metrics evaluate_config(const Dataset& clean, const SynopsisConfig& cfg, unsigned threads = 1);

/// Flat JSON object: rmse_m, ratio, noiseless_count, critical_count and the
/// configuration under "config". Metrics use six fixed decimals.
std::string metrics_json(const Metrics& m, const SynopsisConfig& cfg);

/// JSON object with the eight configuration keys. Values are written in
/// their shortest exact form so a saved config reloads bit for bit.
std::string config_json(const SynopsisConfig& cfg, int indent = 2);

} // namespace synopses
