// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Set SYNOPSES_BREST_CSV to a downloaded Brest AIS extract (mmsi,timestamp,lon,
// lat,type columns) to additionally run a full-scale cross-validated tuning for
// SYNOPSES_BREST_TYPE (default "fishing"); it is skipped otherwise.

#include "fixtures.hpp"
#include "synopses/evaluation.hpp"
#include "synopses/format.hpp"
#include "synopses/ga_tuner.hpp"
#include "synopses/geo_kinematics.hpp"
#include "synopses/harness.hpp"
#include "synopses/synopses_engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

using namespace synopses;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && secs > budget_s) {
    out.pass = false;
    out.detail += " (over the " + std::to_string(budget_s) + " s budget)";
  }
  failures += out.pass ? 0 : 1;
  std::printf("criterion %d %s: %s [%.3f s] %s\n", id, name, out.pass ? "PASS" : "FAIL", secs,
              out.detail.c_str());
  std::fflush(stdout);
}

Synopsis keep_all(const VesselTrack& t) {
  Synopsis out;
  for (const auto& p : t.points) {
    out.push_back({p.mmsi, p.timestamp, p.lon, p.lat, {Annotation::TrackStart}});
  }
  return out;
}

using Oracle = std::vector<std::pair<std::size_t, std::string>>;

Oracle indexed(const VesselTrack& track, const Synopsis& syn) {
  Oracle out;
  std::size_t j = 0;
  for (const auto& cp : syn) {
    while (j < track.size() && track.points[j].timestamp != cp.timestamp) {
      ++j;
    }
    out.emplace_back(j, cp.annotations.to_string());
  }
  return out;
}

std::string describe(const Oracle& o) {
  std::string s;
  for (const auto& [i, l] : o) {
    s += std::to_string(i) + ":" + l + " ";
  }
  return s;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      out[fs::relative(e.path(), root).string()] = s.str();
    }
  }
  return out;
}

Dataset typed(Dataset d, const std::string& type) {
  for (auto& t : d) {
    t.vessel_type = type;
    for (auto& p : t.points) {
      p.vessel_type = type;
    }
  }
  return d;
}

/// Twelve vessels of varied length for the cross-validation checks.
Dataset cv_dataset() {
  Dataset d = fixtures::mixed_dataset();
  const auto extra = {fixtures::straight_track(15, 201), fixtures::corner_track(202),
                      fixtures::stop_track(203), fixtures::gap_track(204),
                      fixtures::smooth_curve_track(205)};
  d.insert(d.end(), extra.begin(), extra.end());
  return typed(d, "passenger");
}

} // namespace

int main() {
  const auto d_fixtures = std::vector<VesselTrack>{fixtures::straight_track(), fixtures::stop_track(),
                                                   fixtures::corner_track(), fixtures::gap_track()};

  criterion(1, "metric identities", 1.0, [&] {
    for (const auto& t : d_fixtures) {
      const auto m = compute_metrics(Dataset{t}, std::vector<Synopsis>{keep_all(t)});
      if (m.rmse_m != 0.0 || m.ratio != 1.0) {
        return Outcome{false, "mmsi " + std::to_string(t.mmsi) + " rmse=" + std::to_string(m.rmse_m)};
      }
    }
    const auto all = fixtures::mixed_dataset();
    std::vector<Synopsis> syn;
    for (const auto& t : all) {
      syn.push_back(keep_all(t));
    }
    const auto m = compute_metrics(all, syn);
    return Outcome{m.rmse_m == 0.0 && m.ratio == 1.0, "RMSE = 0 and Ratio = 1 on every fixture"};
  });

  criterion(2, "haversine oracle", 5.0, [] {
    const double arc = haversine_m({0, 0}, {1, 0});
    if (std::abs(arc - 111194.93) > 0.01) {
      return Outcome{false, "equatorial degree " + std::to_string(arc)};
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lon(-180, 180);
    std::uniform_real_distribution<double> lat(-90, 90);
    auto pick = [&] { return GeoPoint{lon(rng), lat(rng)}; };
    for (int i = 0; i < 10000; ++i) {
      const auto a = pick();
      const auto b = pick();
      const auto c = pick();
      const double ab = haversine_m(a, b);
      if (std::abs(ab - haversine_m(b, a)) > 1e-6 * std::max(1.0, ab)) {
        return Outcome{false, "asymmetric pair"};
      }
      if (haversine_m(a, c) > (ab + haversine_m(b, c)) * (1 + 1e-6) + 1e-6) {
        return Outcome{false, "triangle inequality violated"};
      }
    }
    return Outcome{true, "1 deg = " + fixed(arc, 4) + " m; 10000 pairs and triples"};
  });

  criterion(3, "event fixtures", 1.0, [&] {
    const std::vector<Oracle> expected{
        {{0, "trackStart"}, {19, "trackEnd"}},
        {{0, "trackStart"}, {5, "stopStart"}, {15, "stopEnd"}, {19, "trackEnd"}},
        {{0, "trackStart"}, {9, "changeInHeading"}, {19, "trackEnd"}},
        {{0, "trackStart"}, {9, "gapStart"}, {10, "gapEnd"}, {19, "trackEnd"}},
    };
    const char* names[] = {"straight", "stop", "corner", "gap"};
    for (std::size_t i = 0; i < d_fixtures.size(); ++i) {
      const auto got = indexed(d_fixtures[i], compress_track(d_fixtures[i], {}));
      if (got != expected[i]) {
        return Outcome{false, std::string(names[i]) + " got " + describe(got)};
      }
    }
    const auto pair = fixtures::TrackBuilder(9).silence(2000, 90.0, 10.0).build();
    const auto got = indexed(pair, compress_track(pair, {}));
    if (got != Oracle{{0, "gapStart|trackStart"}, {1, "gapEnd|trackEnd"}}) {
      return Outcome{false, "two-point gap got " + describe(got)};
    }
    return Outcome{true, "straight, stop, corner, gap match point for point"};
  });

  criterion(4, "speed-change inequality", 1.0, [] {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> speed(0.0, 25.0);
    std::uniform_real_distribution<double> ratio(0.01, 0.8);
    int agree = 0;
    int zero = 0;
    for (int i = 0; i < 100; ++i) {
      const double v_now = i % 10 == 0 ? 0.0 : speed(rng);
      const double v_m = speed(rng);
      const double a = ratio(rng);
      bool reference = false;
      if (v_now != 0.0) {
        const double rel = (v_now - v_m) / v_now;
        reference = rel > a || rel < -a;
      } else {
        ++zero;
      }
      agree += speed_deviates(v_now, v_m, a) == reference ? 1 : 0;
    }
    return Outcome{agree == 100,
                   std::to_string(agree) + "/100 agree, " + std::to_string(zero) + " with v_now = 0"};
  });

  criterion(5, "objective arithmetic", 0.0, [] {
    const double passenger = fitness({13.0, 0.1, 0, 0}, 17.0, 0.8);
    const bool ok = std::abs(passenger - 1.5204) <= 1e-3 &&
                    fitness({42.0, 0.3, 0, 0}, 17.0, 0.0) == 0.3 &&
                    fitness({0.0, 1.0, 0, 0}, 0.0, 1.0) == 0.0 &&
                    fitness({5.0, 0.5, 0, 0}, 0.0, 1.0) == 2.5;
    return Outcome{ok, "(13 + 17)^0.8 * 0.1 = " + fixed(passenger, 6)};
  });

  criterion(6, "GA sanity at desk scale", 120.0, [] {
    const auto data = fixtures::mixed_dataset();
    GaHyperParams hp;
    hp.population_size = 30;
    hp.max_generations = 15;
    hp.stagnation_limit = 15;
    hp.rng_seed = 42;
    const auto result = run_ga(data, GeneSpec::standard(), hp);
    for (std::size_t g = 1; g < result.history.size(); ++g) {
      if (result.history[g].best_fitness > result.history[g - 1].best_fitness) {
        return Outcome{false, "best-so-far increased at generation " + std::to_string(g)};
      }
    }
    const double baseline = fitness(evaluate_config(data, {}), hp.r, hp.n);
    const double best = *result.best.fitness;
    return Outcome{best <= baseline && count_points(data) == 500,
                   std::to_string(count_points(data)) + " points, " +
                       std::to_string(result.history.size()) + " generations, best " +
                       fixed(best, 4) + " vs default " + fixed(baseline, 4)};
  });

  criterion(7, "compression on redundant motion", 1.0, [] {
    const auto m = evaluate_config(Dataset{fixtures::straight_track(100)}, {});
    return Outcome{m.ratio <= 0.05, "100-point straight track keeps " + fixed(m.ratio * 100, 1) + "%"};
  });

  const fs::path scratch =
      fs::temp_directory_path() / ("synopses_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  {
    std::ofstream out(scratch / "input.csv");
    write_records_csv(out, flatten(cv_dataset()));
  }

  TuneOptions tune;
  tune.input = scratch / "input.csv";
  tune.vessel_type = "passenger";
  tune.preset = "passenger";
  tune.k = 6;
  tune.hyper.population_size = 10;
  tune.hyper.max_generations = 5;
  tune.hyper.rng_seed = 2019;

  criterion(8, "determinism", 0.0, [&] {
    tune.out_dir = scratch / "run_a";
    cmd_tune(tune);
    tune.out_dir = scratch / "run_b";
    cmd_tune(tune);
    const auto a = tree(scratch / "run_a");
    const auto b = tree(scratch / "run_b");
    return Outcome{!a.empty() && a == b, std::to_string(a.size()) + " files byte-identical"};
  });

  criterion(9, "cross-validation hygiene", 0.0, [&] {
    tune.out_dir = scratch / "run_c";
    const auto out = cmd_tune(tune);
    std::size_t longest = 0;
    std::size_t total = 0;
    for (const auto& t : cv_dataset()) {
      longest = std::max(longest, t.size());
      total += t.size();
    }
    const double mean = static_cast<double>(total) / static_cast<double>(tune.k);
    for (const auto& f : out.folds) {
      const std::set<std::uint64_t> train(f.train_mmsi.begin(), f.train_mmsi.end());
      for (auto id : f.test_mmsi) {
        if (train.count(id) != 0) {
          return Outcome{false, "fold " + std::to_string(f.fold) + " shares vessel " + std::to_string(id)};
        }
      }
      if (std::abs(static_cast<double>(f.test_points) - mean) > static_cast<double>(longest)) {
        return Outcome{false, "fold " + std::to_string(f.fold) + " holds " +
                                  std::to_string(f.test_points) + " points"};
      }
      if (f.train_points + f.test_points != total) {
        return Outcome{false, "fold " + std::to_string(f.fold) + " loses points"};
      }
    }
    return Outcome{out.folds.size() == tune.k,
                   std::to_string(out.folds.size()) + " folds disjoint, within " +
                       std::to_string(longest) + " points of " + fixed(mean, 1)};
  });

  fs::remove_all(scratch);

  if (const char* brest = std::getenv("SYNOPSES_BREST_CSV")) {
    const char* type = std::getenv("SYNOPSES_BREST_TYPE");
    TuneOptions full;
    full.input = brest;
    full.vessel_type = type != nullptr ? type : "fishing";
    full.preset = full.vessel_type;
    full.out_dir = fs::temp_directory_path() / "synopses_brest_tune";
    full.hyper.threads = std::max(1u, std::thread::hardware_concurrency());
    criterion(10, "Brest dataset tuning", 0.0, [&] {
      const auto out = cmd_tune(full);
      const auto& f = out.folds[out.chosen_fold];
      return Outcome{true, "written to " + full.out_dir.string() + ": rmse " +
                               fixed(f.all_metrics.rmse_m, 2) + " m, ratio " +
                               fixed(f.all_metrics.ratio, 4)};
    });
  } else {
    std::printf("Brest dataset tuning: SKIP (set SYNOPSES_BREST_CSV to run)\n");
  }

  std::printf("%s: %d failing\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
