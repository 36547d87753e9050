#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "synopses/ais_ingest.hpp"
#include "synopses/error.hpp"
#include "synopses/evaluation.hpp"
#include "synopses/ga_tuner.hpp"
#include "synopses/geo_kinematics.hpp"
#include "synopses/harness.hpp"
#include "synopses/noise_filter.hpp"
#include "synopses/synopses_engine.hpp"

#include <algorithm>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace synopses;

namespace {

std::vector<std::string> annotation_labels(const CriticalPoint& cp) {
  std::vector<std::string> out;
  for (auto a : cp.annotations.items()) {
    out.emplace_back(label(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

VesselTrack track_from_points(const std::vector<AisRecord>& points) {
  VesselTrack track;
  if (!points.empty()) {
    track.mmsi = points.front().mmsi;
    track.vessel_type = points.front().vessel_type;
  }
  track.points = points;
  return track;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Streaming AIS trajectory synopses and GA parameter tuning";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  py::class_<AisRecord>(m, "AisRecord")
      .def(py::init([](std::uint64_t mmsi, std::int64_t timestamp, double lon, double lat,
                       const std::string& vessel_type) {
             return AisRecord{mmsi, timestamp, lon, lat, normalize_vessel_type(vessel_type)};
           }),
           py::arg("mmsi"), py::arg("timestamp"), py::arg("lon"), py::arg("lat"),
           py::arg("vessel_type") = "unknown")
      .def_readwrite("mmsi", &AisRecord::mmsi)
      .def_readwrite("timestamp", &AisRecord::timestamp)
      .def_readwrite("lon", &AisRecord::lon)
      .def_readwrite("lat", &AisRecord::lat)
      .def_readwrite("vessel_type", &AisRecord::vessel_type)
      .def("__repr__", [](const AisRecord& r) {
        return "AisRecord(mmsi=" + std::to_string(r.mmsi) + ", timestamp=" +
               std::to_string(r.timestamp) + ")";
      });

  py::class_<VesselTrack>(m, "VesselTrack")
      .def(py::init<>())
      .def_readwrite("mmsi", &VesselTrack::mmsi)
      .def_readwrite("vessel_type", &VesselTrack::vessel_type)
      .def_readwrite("points", &VesselTrack::points)
      .def("__len__", &VesselTrack::size);

  py::class_<SynopsisConfig>(m, "SynopsisConfig")
      .def(py::init<>())
      .def_readwrite("angle_threshold_deg", &SynopsisConfig::angle_threshold_deg)
      .def_readwrite("buffer_size", &SynopsisConfig::buffer_size)
      .def_readwrite("gap_period_s", &SynopsisConfig::gap_period_s)
      .def_readwrite("historical_timespan_s", &SynopsisConfig::historical_timespan_s)
      .def_readwrite("no_speed_threshold_kn", &SynopsisConfig::no_speed_threshold_kn)
      .def_readwrite("low_speed_threshold_kn", &SynopsisConfig::low_speed_threshold_kn)
      .def_readwrite("speed_ratio", &SynopsisConfig::speed_ratio)
      .def_readwrite("distance_threshold_m", &SynopsisConfig::distance_threshold_m)
      .def("validate", &SynopsisConfig::validate)
      .def("to_json", [](const SynopsisConfig& c) { return config_json(c); })
      .def_static("from_json", &parse_config_json)
      .def(py::self == py::self);

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("mmsi", &CriticalPoint::mmsi)
      .def_readonly("timestamp", &CriticalPoint::timestamp)
      .def_readonly("lon", &CriticalPoint::lon)
      .def_readonly("lat", &CriticalPoint::lat)
      .def_property_readonly("annotations", &annotation_labels)
      .def("__repr__", [](const CriticalPoint& cp) {
        return "CriticalPoint(t=" + std::to_string(cp.timestamp) + ", " +
               cp.annotations.to_string() + ")";
      });

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("rmse_m", &Metrics::rmse_m)
      .def_readonly("ratio", &Metrics::ratio)
      .def_readonly("noiseless_count", &Metrics::noiseless_count)
      .def_readonly("critical_count", &Metrics::critical_count);

  py::class_<VesselState>(m, "VesselState")
      .def(py::init<SynopsisConfig>(), py::arg("config") = SynopsisConfig{})
      .def("ingest", &VesselState::ingest)
      .def("finish", &VesselState::finish);

  py::class_<GaHyperParams>(m, "GaHyperParams")
      .def(py::init<>())
      .def_readwrite("r", &GaHyperParams::r)
      .def_readwrite("n", &GaHyperParams::n)
      .def_readwrite("population_size", &GaHyperParams::population_size)
      .def_readwrite("max_generations", &GaHyperParams::max_generations)
      .def_readwrite("stagnation_limit", &GaHyperParams::stagnation_limit)
      .def_readwrite("crossover_prob", &GaHyperParams::crossover_prob)
      .def_readwrite("mutation_prob", &GaHyperParams::mutation_prob)
      .def_readwrite("per_gene_mutation_prob", &GaHyperParams::per_gene_mutation_prob)
      .def_readwrite("mutation_sigma_fraction", &GaHyperParams::mutation_sigma_fraction)
      .def_readwrite("rng_seed", &GaHyperParams::rng_seed)
      .def_readwrite("threads", &GaHyperParams::threads);

  m.def(
      "haversine_m",
      [](double lon1, double lat1, double lon2, double lat2) {
        return haversine_m({lon1, lat1}, {lon2, lat2});
      },
      py::arg("lon1"), py::arg("lat1"), py::arg("lon2"), py::arg("lat2"),
      "Great-circle distance in meters.");

  m.def(
      "bearing_deg",
      [](double lon1, double lat1, double lon2, double lat2) {
        return bearing_deg({lon1, lat1}, {lon2, lat2});
      },
      py::arg("lon1"), py::arg("lat1"), py::arg("lon2"), py::arg("lat2"));

  m.def(
      "interpolate",
      [](std::tuple<double, double, std::int64_t> a, std::tuple<double, double, std::int64_t> b,
         double tau) {
        const auto p = interpolate({std::get<2>(a), {std::get<0>(a), std::get<1>(a)}},
                                   {std::get<2>(b), {std::get<0>(b), std::get<1>(b)}}, tau);
        return std::make_pair(p.lon, p.lat);
      },
      py::arg("a"), py::arg("b"), py::arg("tau"),
      "Linear (lon, lat) at time tau between knots given as (lon, lat, t).");

  m.def(
      "compress_track",
      [](const std::vector<AisRecord>& points, const SynopsisConfig& cfg) {
        return compress_track(track_from_points(points), cfg);
      },
      py::arg("points"), py::arg("config") = SynopsisConfig{},
      "Critical points of one clean, time-ordered vessel track.");

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, bool noise_filter) {
        PipelineOptions opts;
        if (!noise_filter) {
          opts.filter = NoiseFilterConfig::disabled();
        }
        return load_clean_dataset(path, opts).tracks;
      },
      py::arg("path"), py::arg("noise_filter") = true,
      "Parse, partition and noise-filter an AIS CSV file into tracks.");

  m.def(
      "evaluate_config",
      [](const Dataset& tracks, const SynopsisConfig& cfg) { return evaluate_config(tracks, cfg); },
      py::arg("tracks"), py::arg("config") = SynopsisConfig{});

  m.def(
      "fitness", [](double rmse_m, double ratio, double r, double n) {
        return fitness(Metrics{rmse_m, ratio, 0, 0}, r, n);
      },
      py::arg("rmse_m"), py::arg("ratio"), py::arg("r"), py::arg("n"),
      "(rmse_m + r)^n * ratio");

  m.def(
      "run_ga",
      [](const Dataset& tracks, const GaHyperParams& hp) {
        GaResult result;
        {
          py::gil_scoped_release release;
          result = run_ga(tracks, GeneSpec::standard(), hp);
        }
        py::list history;
        for (const auto& h : result.history) {
          py::dict row;
          row["generation"] = h.generation;
          row["best_fitness"] = h.best_fitness;
          row["mean_fitness"] = h.mean_fitness;
          row["best_rmse"] = h.best_rmse;
          row["best_ratio"] = h.best_ratio;
          history.append(row);
        }
        return py::make_tuple(to_config(result.best.genes), *result.best.fitness, history);
      },
      py::arg("tracks"), py::arg("hyper") = GaHyperParams{},
      "Returns (best config, best fitness, per-generation history).");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
