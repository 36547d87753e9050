#include "synopses/evaluation.hpp"

#include "synopses/format.hpp"
#include "synopses/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace synopses {

namespace {

// Neumaier compensated sum, so the reduction result does not depend on how
// per-vessel sums were scheduled.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace

GeoPoint synchronized_position(std::span<const CriticalPoint> synopsis, double tau) {
  if (synopsis.empty()) {
    throw std::invalid_argument("synchronized_position: empty synopsis");
  }
  const auto after = std::upper_bound(
      synopsis.begin(), synopsis.end(), tau,
      [](double t, const CriticalPoint& cp) { return t < static_cast<double>(cp.timestamp); });
  if (after == synopsis.begin()) {
    return {synopsis.front().lon, synopsis.front().lat};
  }
  if (after == synopsis.end()) {
    return {synopsis.back().lon, synopsis.back().lat};
  }
  const auto& before = *std::prev(after);
  return interpolate(before.knot(), after->knot(), tau);
}

double squared_error_sum(const VesselTrack& clean, std::span<const CriticalPoint> synopsis) {
  CompensatedSum sum;
  for (const auto& p : clean.points) {
    const auto approx = synchronized_position(synopsis, static_cast<double>(p.timestamp));
    const double h = haversine_m(position_of(p), approx);
    sum.add(h * h);
  }
  return sum.value();
}

Metrics compute_metrics(const Dataset& clean, std::span<const Synopsis> synopses) {
  if (clean.size() != synopses.size()) {
    throw std::invalid_argument("compute_metrics: " + std::to_string(clean.size()) +
                                " tracks but " + std::to_string(synopses.size()) + " synopses");
  }
  Metrics m;
  CompensatedSum squared;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean[i].empty()) {
      continue;
    }
    if (synopses[i].empty()) {
      throw std::invalid_argument("compute_metrics: empty synopsis for vessel " +
                                  std::to_string(clean[i].mmsi));
    }
    squared.add(squared_error_sum(clean[i], synopses[i]));
    m.noiseless_count += clean[i].size();
    m.critical_count += synopses[i].size();
  }
  if (m.noiseless_count == 0) {
    throw std::invalid_argument("compute_metrics: dataset has no points");
  }
  const auto n = static_cast<double>(m.noiseless_count);
  m.rmse_m = std::sqrt(squared.value() / n);
  m.ratio = static_cast<double>(m.critical_count) / n;
  return m;
}

Metrics evaluate_config(const Dataset& clean, const SynopsisConfig& cfg, unsigned threads) {
  std::vector<Synopsis> synopses(clean.size());
  parallel_for(clean.size(), threads,
               [&](std::size_t i) { synopses[i] = compress_track(clean[i], cfg); });
  return compute_metrics(clean, synopses);
}

std::string config_json(const SynopsisConfig& cfg, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent >= 2 ? indent - 2 : 0), ' ');
  std::ostringstream out;
  out << "{\n"
      << pad << "\"angle_threshold_deg\": " << shortest(cfg.angle_threshold_deg) << ",\n"
      << pad << "\"buffer_size\": " << cfg.buffer_size << ",\n"
      << pad << "\"gap_period_s\": " << shortest(cfg.gap_period_s) << ",\n"
      << pad << "\"historical_timespan_s\": " << shortest(cfg.historical_timespan_s) << ",\n"
      << pad << "\"no_speed_threshold_kn\": " << shortest(cfg.no_speed_threshold_kn) << ",\n"
      << pad << "\"low_speed_threshold_kn\": " << shortest(cfg.low_speed_threshold_kn) << ",\n"
      << pad << "\"speed_ratio\": " << shortest(cfg.speed_ratio) << ",\n"
      << pad << "\"distance_threshold_m\": " << shortest(cfg.distance_threshold_m) << "\n"
      << close_pad << "}";
  return out.str();
}

std::string metrics_json(const Metrics& m, const SynopsisConfig& cfg) {
  std::ostringstream out;
  out << "{\n"
      << "  \"rmse_m\": " << fixed(m.rmse_m) << ",\n"
      << "  \"ratio\": " << fixed(m.ratio) << ",\n"
      << "  \"noiseless_count\": " << m.noiseless_count << ",\n"
      << "  \"critical_count\": " << m.critical_count << ",\n"
      << "  \"config\": " << config_json(cfg, 4) << "\n"
      << "}\n";
  return out.str();
}

} // namespace synopses
