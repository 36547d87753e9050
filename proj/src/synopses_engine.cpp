#include "synopses/synopses_engine.hpp"

#include "synopses/error.hpp"
#include "synopses/format.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace synopses {

namespace {

std::array<double, 8> field_values(const SynopsisConfig& c) {
  return {c.angle_threshold_deg,   static_cast<double>(c.buffer_size), c.gap_period_s,
          c.historical_timespan_s, c.no_speed_threshold_kn,            c.low_speed_threshold_kn,
          c.speed_ratio,           c.distance_threshold_m};
}

constexpr std::array<std::string_view, kAnnotationCount> kLabels = {
    "stopStart",        "stopEnd",        "slowMotionStart", "slowMotionEnd",
    "changeInHeading",  "speedChangeStart", "speedChangeEnd", "gapStart",
    "gapEnd",           "trackStart",     "trackEnd",
};

} // namespace

void SynopsisConfig::validate() const {
  const auto values = field_values(*this);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& range = kConfigRanges[i];
    if (!(values[i] >= range.lower && values[i] <= range.upper)) {
      throw ConfigError(std::string(range.key) + " = " + fixed(values[i]) + " outside [" +
                        fixed(range.lower) + ", " + fixed(range.upper) + "]");
    }
  }
}

void SynopsisConfig::check_usable() const {
  if (buffer_size < 2) {
    throw std::invalid_argument("buffer_size must be at least 2");
  }
  const auto values = field_values(*this);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument(std::string(kConfigRanges[i].key) + " must be positive");
    }
  }
}

std::string_view label(Annotation a) { return kLabels[static_cast<std::size_t>(a)]; }

std::optional<Annotation> parse_annotation(std::string_view text) {
  const auto it = std::find(kLabels.begin(), kLabels.end(), text);
  if (it == kLabels.end()) {
    return std::nullopt;
  }
  return static_cast<Annotation>(std::distance(kLabels.begin(), it));
}

std::size_t AnnotationSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Annotation> AnnotationSet::items() const {
  std::vector<Annotation> out;
  for (std::size_t i = 0; i < kAnnotationCount; ++i) {
    if (has(static_cast<Annotation>(i))) {
      out.push_back(static_cast<Annotation>(i));
    }
  }
  return out;
}

std::string AnnotationSet::to_string() const {
  std::vector<std::string_view> names;
  for (auto a : items()) {
    names.push_back(label(a));
  }
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) {
      out.push_back('|');
    }
    out += names[i];
  }
  return out;
}

AnnotationSet AnnotationSet::parse(std::string_view joined) {
  AnnotationSet set;
  std::size_t start = 0;
  while (start <= joined.size()) {
    auto bar = joined.find('|', start);
    if (bar == std::string_view::npos) {
      bar = joined.size();
    }
    const auto token = joined.substr(start, bar - start);
    const auto a = parse_annotation(token);
    if (!a) {
      throw std::invalid_argument("unknown annotation '" + std::string(token) + "'");
    }
    set.add(*a);
    start = bar + 1;
  }
  return set;
}

bool speed_deviates(double v_now_kn, double v_mean_kn, double ratio) {
  if (v_now_kn == 0.0) {
    return false;
  }
  return std::abs((v_now_kn - v_mean_kn) / v_now_kn) > ratio;
}

// ---------------------------------------------------------------------------

VesselState::VesselState(SynopsisConfig cfg) : cfg_(cfg) {
  cfg_.check_usable();
  buffer_.reserve(static_cast<std::size_t>(cfg_.buffer_size));
}

void VesselState::push_buffer(const AisRecord& p) {
  if (buffer_.size() == static_cast<std::size_t>(cfg_.buffer_size)) {
    buffer_.erase(buffer_.begin());
  }
  buffer_.push_back(p);
}

void VesselState::restart_buffer() {
  buffer_.clear();
  buffer_.push_back(*last_);
}

void VesselState::close_intervals(AnnotationSet& marks) {
  if (stop_anchor_) {
    marks.add(Annotation::StopEnd);
    stop_anchor_.reset();
  }
  if (in_slow_motion_) {
    marks.add(Annotation::SlowMotionEnd);
    in_slow_motion_ = false;
  }
  if (in_speed_change_) {
    marks.add(Annotation::SpeedChangeEnd);
    in_speed_change_ = false;
  }
}

std::vector<CriticalPoint> VesselState::ingest(const AisRecord& p) {
  if (!last_) {
    last_ = p;
    last_marks_ = {Annotation::TrackStart};
    last_heading_deg_ = 0.0;
    buffer_.clear();
    buffer_.push_back(p);
    return {};
  }
  if (p.mmsi != last_->mmsi) {
    throw std::invalid_argument("VesselState: location of vessel " + std::to_string(p.mmsi) +
                                " fed to state of vessel " + std::to_string(last_->mmsi));
  }
  if (p.timestamp <= last_->timestamp) {
    throw std::invalid_argument("VesselState: non-increasing timestamp " +
                                std::to_string(p.timestamp) + " after " +
                                std::to_string(last_->timestamp));
  }

  AnnotationSet current;
  evaluate(p, last_marks_, current);

  std::vector<CriticalPoint> out;
  if (!last_marks_.empty()) {
    out.push_back({last_->mmsi, last_->timestamp, last_->lon, last_->lat, last_marks_});
  }
  last_ = p;
  last_marks_ = current;
  return out;
}

void VesselState::evaluate(const AisRecord& p, AnnotationSet& prev, AnnotationSet& cur) {
  // Gap: velocities across the silence mean nothing, so the gap closes every
  // open interval and the new location starts a fresh history.
  if (static_cast<double>(p.timestamp - last_->timestamp) > cfg_.gap_period_s) {
    prev.add(Annotation::GapStart);
    cur.add(Annotation::GapEnd);
    close_intervals(prev);
    buffer_.clear();
    push_buffer(p);
    return;
  }

  const auto now = segment_velocity(*last_, p, last_heading_deg_);
  last_heading_deg_ = now.heading_deg;

  // Stop
  if (stop_anchor_) {
    const bool moved =
        haversine_m(position_of(*stop_anchor_), position_of(p)) >= cfg_.distance_threshold_m;
    if (!moved && now.speed_knots < cfg_.no_speed_threshold_kn) {
      push_buffer(p);
      return;
    }
    prev.add(Annotation::StopEnd);
    stop_anchor_.reset();
    restart_buffer();
  }
  if (now.speed_knots < cfg_.no_speed_threshold_kn) {
    if (in_slow_motion_) {
      prev.add(Annotation::SlowMotionEnd);
      in_slow_motion_ = false;
    }
    if (in_speed_change_) {
      prev.add(Annotation::SpeedChangeEnd);
      in_speed_change_ = false;
    }
    cur.add(Annotation::StopStart);
    stop_anchor_ = p;
    push_buffer(p);
    return;
  }

  // Slow motion
  if (now.speed_knots < cfg_.low_speed_threshold_kn) {
    if (!in_slow_motion_) {
      cur.add(Annotation::SlowMotionStart);
      in_slow_motion_ = true;
    }
  } else if (in_slow_motion_) {
    prev.add(Annotation::SlowMotionEnd);
    in_slow_motion_ = false;
  }

  const auto mean = mean_velocity(buffer_, cfg_.historical_timespan_s, p.timestamp);

  // Change in heading
  bool turned = false;
  if (mean && std::abs(heading_difference(mean->heading_deg, now.heading_deg)) >
                  cfg_.angle_threshold_deg) {
    prev.add(Annotation::ChangeInHeading);
    turned = true;
  }

  // Speed change
  if (mean && now.speed_knots > 0.0) {
    const bool deviates = speed_deviates(now.speed_knots, mean->speed_knots, cfg_.speed_ratio);
    if (deviates && !in_speed_change_) {
      cur.add(Annotation::SpeedChangeStart);
      in_speed_change_ = true;
    } else if (!deviates && in_speed_change_) {
      cur.add(Annotation::SpeedChangeEnd);
      in_speed_change_ = false;
    }
  }

  if (turned) {
    restart_buffer();
  }
  push_buffer(p);
}

std::vector<CriticalPoint> VesselState::finish() {
  if (!last_) {
    return {};
  }
  AnnotationSet marks = last_marks_;
  close_intervals(marks);
  marks.add(Annotation::TrackEnd);
  std::vector<CriticalPoint> out{{last_->mmsi, last_->timestamp, last_->lon, last_->lat, marks}};

  last_.reset();
  last_marks_ = {};
  buffer_.clear();
  last_heading_deg_ = 0.0;
  return out;
}

// ---------------------------------------------------------------------------

SynopsesGenerator::SynopsesGenerator(SynopsisConfig cfg) : cfg_(cfg) { cfg_.check_usable(); }

std::vector<CriticalPoint> SynopsesGenerator::push(const AisRecord& p) {
  auto it = states_.find(p.mmsi);
  if (it == states_.end()) {
    it = states_.emplace(p.mmsi, VesselState(cfg_)).first;
  }
  return it->second.ingest(p);
}

std::vector<CriticalPoint> SynopsesGenerator::flush() {
  std::vector<CriticalPoint> out;
  for (auto& [mmsi, state] : states_) {
    auto tail = state.finish();
    out.insert(out.end(), tail.begin(), tail.end());
  }
  states_.clear();
  return out;
}

Synopsis compress_track(const VesselTrack& track, const SynopsisConfig& cfg) {
  Synopsis out;
  if (track.empty()) {
    return out;
  }
  VesselState state(cfg);
  for (const auto& p : track.points) {
    auto emitted = state.ingest(p);
    out.insert(out.end(), emitted.begin(), emitted.end());
  }
  auto tail = state.finish();
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

void write_synopsis_csv(std::ostream& out, std::span<const CriticalPoint> points) {
  out << "mmsi,timestamp,lon,lat,annotations\n";
  for (const auto& cp : points) {
    out << cp.mmsi << ',' << cp.timestamp << ',' << fixed(cp.lon) << ',' << fixed(cp.lat) << ','
        << cp.annotations.to_string() << '\n';
  }
}

std::vector<CriticalPoint> read_synopsis_csv(std::istream& in) {
  std::vector<CriticalPoint> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || (line_no == 1 && line.rfind("mmsi", 0) == 0)) {
      continue;
    }
    std::array<std::string_view, 5> f;
    std::string_view rest = line;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto comma = i < 4 ? rest.find(',') : std::string_view::npos;
      if (i < 4 && comma == std::string_view::npos) {
        throw DataError("synopsis line " + std::to_string(line_no) + ": expected 5 fields");
      }
      f[i] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    CriticalPoint cp;
    auto num = [&](std::string_view text, auto& value) {
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("synopsis line " + std::to_string(line_no) + ": bad number '" +
                        std::string(text) + "'");
      }
    };
    num(f[0], cp.mmsi);
    num(f[1], cp.timestamp);
    num(f[2], cp.lon);
    num(f[3], cp.lat);
    try {
      cp.annotations = AnnotationSet::parse(f[4]);
    } catch (const std::invalid_argument& e) {
      throw DataError("synopsis line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(cp);
  }
  return out;
}

} // namespace synopses
