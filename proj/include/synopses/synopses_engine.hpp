#pragma once

#include "synopses/ais_ingest.hpp"
#include "synopses/geo_kinematics.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synopses {

/// The eight tunable compression parameters, with hand-picked defaults.
struct SynopsisConfig {
  double angle_threshold_deg = 4.0;       // turn when heading deviates more than this
  int buffer_size = 5;                    // locations kept for the mean velocity
  double gap_period_s = 1800.0;           // silence longer than this is a gap
  double historical_timespan_s = 3600.0;  // buffered points older than this are ignored
  double no_speed_threshold_kn = 0.5;     // below this the vessel is stopped
  double low_speed_threshold_kn = 5.0;    // below this the vessel is in slow motion
  double speed_ratio = 0.25;              // relative speed deviation for a speed change
  double distance_threshold_m = 50.0;     // displacement that ends a stop

  /// Throws ConfigError unless every field lies in its tunable range
  /// (see kConfigRanges).
  void validate() const;

  /// Weaker check the engine itself needs: positive thresholds and a
  /// buffer of at least two locations. Throws std::invalid_argument.
  void check_usable() const;

  friend bool operator==(const SynopsisConfig&, const SynopsisConfig&) = default;
};

struct ParameterRange {
  std::string_view key;
  double lower;
  double upper;
};

/// Tunable range of each SynopsisConfig field, in declaration order.
inline constexpr std::array<ParameterRange, 8> kConfigRanges = {{
    {"angle_threshold_deg", 2.0, 25.0},
    {"buffer_size", 3.0, 50.0},
    {"gap_period_s", 200.0, 5000.0},
    {"historical_timespan_s", 300.0, 5000.0},
    {"no_speed_threshold_kn", 0.05, 2.0},
    {"low_speed_threshold_kn", 0.05, 8.0},
    {"speed_ratio", 0.01, 0.8},
    {"distance_threshold_m", 2.0, 100.0},
}};

enum class Annotation : std::uint16_t {
  StopStart,
  StopEnd,
  SlowMotionStart,
  SlowMotionEnd,
  ChangeInHeading,
  SpeedChangeStart,
  SpeedChangeEnd,
  GapStart,
  GapEnd,
  TrackStart,
  TrackEnd,
};

inline constexpr std::size_t kAnnotationCount = 11;

std::string_view label(Annotation a);
std::optional<Annotation> parse_annotation(std::string_view text);

/// Small bit set of annotations.
class AnnotationSet {
public:
  AnnotationSet() = default;
  AnnotationSet(std::initializer_list<Annotation> items) {
    for (auto a : items) {
      add(a);
    }
  }

  void add(Annotation a) { bits_ |= bit(a); }
  void merge(AnnotationSet other) { bits_ |= other.bits_; }
  bool has(Annotation a) const { return (bits_ & bit(a)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;

  /// Members in enum order.
  std::vector<Annotation> items() const;

  /// Labels sorted lexicographically and joined with '|'.
  std::string to_string() const;

  /// Inverse of to_string; throws std::invalid_argument on unknown labels.
  static AnnotationSet parse(std::string_view joined);

  friend bool operator==(AnnotationSet, AnnotationSet) = default;

private:
  static std::uint16_t bit(Annotation a) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(a));
  }
  std::uint16_t bits_ = 0;
};

/// A retained input location and the events it marks.
struct CriticalPoint {
  std::uint64_t mmsi = 0;
  std::int64_t timestamp = 0;
  double lon = 0.0;
  double lat = 0.0;
  AnnotationSet annotations;

  TimedPosition knot() const { return {timestamp, {lon, lat}}; }

  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

using Synopsis = std::vector<CriticalPoint>;

/// Speed-change test |(v_now - v_mean) / v_now| > ratio. False when
/// v_now is zero; standstill is the stop rule's business.
bool speed_deviates(double v_now_kn, double v_mean_kn, double ratio);

/// Single-pass event detector for one vessel.
///
/// Each clean location is checked, in order, for a communication gap, a
/// stop, slow motion, a change in heading and a change in speed. Rules may
/// mark either the new location or the one before it, so a location is
/// emitted only once the next one has been seen (or on finish()), carrying
/// the union of its annotations.
///
/// Mean velocity comes from the buffered history of at most buffer_size
/// locations within historical_timespan_s. That history restarts at the
/// last location whenever a gap opens, a stop ends or a turning point is
/// marked, so it only describes motion since the latest discontinuity.
class VesselState {
public:
  explicit VesselState(SynopsisConfig cfg);

  /// Consumes the next clean location and returns the critical points that
  /// became final. Throws std::invalid_argument when the timestamp does not
  /// increase or the mmsi changes.
  std::vector<CriticalPoint> ingest(const AisRecord& p);

  /// Flushes the last location as trackEnd, closing any open interval on
  /// it. The state is reset afterwards and may be reused.
  std::vector<CriticalPoint> finish();

  const SynopsisConfig& config() const { return cfg_; }
  bool in_stop() const { return stop_anchor_.has_value(); }
  bool in_slow_motion() const { return in_slow_motion_; }
  bool in_speed_change() const { return in_speed_change_; }
  std::span<const AisRecord> buffer() const { return buffer_; }
  const std::optional<AisRecord>& last_point() const { return last_; }

private:
  void evaluate(const AisRecord& p, AnnotationSet& prev, AnnotationSet& cur);
  void close_intervals(AnnotationSet& marks);
  void push_buffer(const AisRecord& p);
  void restart_buffer();

  SynopsisConfig cfg_;
  std::vector<AisRecord> buffer_;
  std::optional<AisRecord> last_;
  AnnotationSet last_marks_;
  double last_heading_deg_ = 0.0;
  std::optional<AisRecord> stop_anchor_;
  bool in_slow_motion_ = false;
  bool in_speed_change_ = false;
};

/// In-process stream processor: interleaved locations of many vessels in,
/// critical points out. Each vessel gets its own VesselState.
class SynopsesGenerator {
public:
  explicit SynopsesGenerator(SynopsisConfig cfg);

  std::vector<CriticalPoint> push(const AisRecord& p);

  /// Finishes every open vessel, in ascending mmsi order.
  std::vector<CriticalPoint> flush();

  std::size_t vessel_count() const { return states_.size(); }

private:
  SynopsisConfig cfg_;
  std::map<std::uint64_t, VesselState> states_;
};

/// Folds a clean, time-ordered track through a fresh VesselState.
Synopsis compress_track(const VesselTrack& track, const SynopsisConfig& cfg);

/// "mmsi,timestamp,lon,lat,annotations" with a header row.
void write_synopsis_csv(std::ostream& out, std::span<const CriticalPoint> points);

/// Reads what write_synopsis_csv wrote. Throws DataError on malformed rows.
std::vector<CriticalPoint> read_synopsis_csv(std::istream& in);

} // namespace synopses
