#include "synopses/harness.hpp"

#include "synopses/error.hpp"
#include "synopses/format.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace synopses {

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read '" + path.string() + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write '" + path.string() + "'");
  }
  out << text;
  if (!out) {
    throw DataError("write failed for '" + path.string() + "'");
  }
}

void require_input(const fs::path& input) {
  if (!fs::exists(input)) {
    throw ConfigError("input file '" + input.string() + "' does not exist");
  }
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
}

SynopsisConfig config_or_defaults(const std::optional<fs::path>& path) {
  return path ? load_config(*path) : SynopsisConfig{};
}

std::string mmsi_list(const std::vector<std::uint64_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) {
      out.push_back(' ');
    }
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<std::uint64_t> mmsis_of(const Dataset& tracks) {
  std::vector<std::uint64_t> ids;
  ids.reserve(tracks.size());
  for (const auto& t : tracks) {
    ids.push_back(t.mmsi);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string history_csv(const std::vector<GenerationStats>& history) {
  std::ostringstream out;
  out << "generation,best_fitness,mean_fitness,best_rmse,best_ratio\n";
  for (const auto& h : history) {
    out << h.generation << ',' << fixed(h.best_fitness) << ',' << fixed(h.mean_fitness) << ','
        << fixed(h.best_rmse) << ',' << fixed(h.best_ratio) << '\n';
  }
  return out.str();
}

} // namespace

SynopsisConfig parse_config_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }

  SynopsisConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) {
      throw ConfigError("config key '" + key + "' must be a number");
    }
    const double v = value.get<double>();
    if (key == "angle_threshold_deg") {
      cfg.angle_threshold_deg = v;
    } else if (key == "buffer_size") {
      if (v != std::floor(v)) {
        throw ConfigError("config key 'buffer_size' must be an integer");
      }
      cfg.buffer_size = static_cast<int>(v);
    } else if (key == "gap_period_s") {
      cfg.gap_period_s = v;
    } else if (key == "historical_timespan_s") {
      cfg.historical_timespan_s = v;
    } else if (key == "no_speed_threshold_kn") {
      cfg.no_speed_threshold_kn = v;
    } else if (key == "low_speed_threshold_kn") {
      cfg.low_speed_threshold_kn = v;
    } else if (key == "speed_ratio") {
      cfg.speed_ratio = v;
    } else if (key == "distance_threshold_m") {
      cfg.distance_threshold_m = v;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SynopsisConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) {
    throw ConfigError("config file '" + path.string() + "' does not exist");
  }
  try {
    return parse_config_json(read_text(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_config(const fs::path& path, const SynopsisConfig& cfg) {
  write_text(path, config_json(cfg) + "\n");
}

CleanDataset load_clean_dataset(const fs::path& input, const PipelineOptions& opts) {
  require_input(input);
  opts.filter.validate();
  auto parsed = parse_file(input, opts.columns);
  CleanDataset out;
  out.parse = std::move(parsed.report);
  out.tracks = filter_dataset(partition_tracks(parsed.records), opts.filter, &out.noise_rejected);
  return out;
}

CompressOutcome cmd_compress(const CompressOptions& opts) {
  const auto cfg = config_or_defaults(opts.config);
  const auto data = load_clean_dataset(opts.input, opts.pipeline);
  if (data.tracks.empty()) {
    throw DataError("input '" + opts.input.string() + "' has no usable locations");
  }

  std::vector<Synopsis> synopses(data.tracks.size());
  for (std::size_t i = 0; i < data.tracks.size(); ++i) {
    synopses[i] = compress_track(data.tracks[i], cfg);
  }
  CompressOutcome outcome{cfg, compute_metrics(data.tracks, synopses), 0};

  prepare_out_dir(opts.out_dir);
  std::ostringstream csv;
  csv << "mmsi,timestamp,lon,lat,annotations\n";
  for (const auto& s : synopses) {
    std::ostringstream part;
    write_synopsis_csv(part, s);
    const auto text = part.str();
    csv << text.substr(text.find('\n') + 1);
    outcome.synopsis_points += s.size();
  }
  write_text(opts.out_dir / "synopses.csv", csv.str());
  write_text(opts.out_dir / "metrics.json", metrics_json(outcome.metrics, cfg));
  return outcome;
}

EvalOutcome cmd_eval(const fs::path& input, const std::optional<fs::path>& config,
                     const PipelineOptions& pipeline) {
  const auto cfg = config_or_defaults(config);
  const auto data = load_clean_dataset(input, pipeline);
  if (data.tracks.empty()) {
    throw DataError("input '" + input.string() + "' has no usable locations");
  }
  return {cfg, evaluate_config(data.tracks, cfg, pipeline.threads)};
}

Comparison cmd_compare(const CompareOptions& opts) {
  Comparison c;
  c.config_a = config_or_defaults(opts.config_a);
  c.config_b = config_or_defaults(opts.config_b);
  const auto data = load_clean_dataset(opts.input, opts.pipeline);
  if (data.tracks.empty()) {
    throw DataError("input '" + opts.input.string() + "' has no usable locations");
  }
  c.a = evaluate_config(data.tracks, c.config_a, opts.pipeline.threads);
  c.b = evaluate_config(data.tracks, c.config_b, opts.pipeline.threads);

  prepare_out_dir(opts.out_dir);
  std::ostringstream json;
  json << "{\n"
       << "  \"rmse_a\": " << fixed(c.a.rmse_m) << ",\n"
       << "  \"ratio_a\": " << fixed(c.a.ratio) << ",\n"
       << "  \"rmse_b\": " << fixed(c.b.rmse_m) << ",\n"
       << "  \"ratio_b\": " << fixed(c.b.ratio) << ",\n"
       << "  \"config_a\": " << config_json(c.config_a, 4) << ",\n"
       << "  \"config_b\": " << config_json(c.config_b, 4) << "\n"
       << "}\n";
  write_text(opts.out_dir / "comparison.json", json.str());

  std::ostringstream plot;
  plot << "config,metric,value\n"
       << "A,rmse_m," << fixed(c.a.rmse_m) << '\n'
       << "A,ratio," << fixed(c.a.ratio) << '\n'
       << "B,rmse_m," << fixed(c.b.rmse_m) << '\n'
       << "B,ratio," << fixed(c.b.ratio) << '\n';
  write_text(opts.out_dir / "comparison_plot.csv", plot.str());
  return c;
}

std::string manifest_json(const RunManifest& m) {
  const auto& h = m.hyper;
  std::ostringstream out;
  out << "{\n"
      << "  \"command\": " << json_quote(m.command) << ",\n"
      << "  \"input\": " << json_quote(m.input) << ",\n"
      << "  \"vessel_type\": " << json_quote(m.vessel_type) << ",\n"
      << "  \"preset\": " << json_quote(m.preset) << ",\n"
      << "  \"k\": " << m.k << ",\n"
      << "  \"r\": " << fixed(h.r) << ",\n"
      << "  \"n\": " << fixed(h.n) << ",\n"
      << "  \"rng_seed\": " << h.rng_seed << ",\n"
      << "  \"population_size\": " << h.population_size << ",\n"
      << "  \"max_generations\": " << h.max_generations << ",\n"
      << "  \"stagnation_limit\": " << h.stagnation_limit << ",\n"
      << "  \"tournament_size\": " << h.tournament_size << ",\n"
      << "  \"crossover_prob\": " << fixed(h.crossover_prob) << ",\n"
      << "  \"mutation_prob\": " << fixed(h.mutation_prob) << ",\n"
      << "  \"per_gene_mutation_prob\": " << fixed(h.per_gene_mutation_prob) << ",\n"
      << "  \"mutation_sigma_fraction\": " << fixed(h.mutation_sigma_fraction) << "\n"
      << "}\n";
  return out.str();
}

TuneOutcome cmd_tune(const TuneOptions& opts) {
  TuneOutcome outcome;
  auto& manifest = outcome.manifest;
  manifest.command = "tune";
  manifest.input = opts.input.string();
  manifest.vessel_type = normalize_vessel_type(opts.vessel_type);
  manifest.k = opts.k;
  manifest.hyper = opts.hyper;

  if (opts.preset) {
    const auto preset = find_preset(*opts.preset);
    if (!preset) {
      std::string names;
      for (const auto& p : vessel_type_presets()) {
        names += (names.empty() ? "" : ", ") + std::string(p.name);
      }
      throw ConfigError("unknown preset '" + *opts.preset + "' (available: " + names + ")");
    }
    manifest.preset = std::string(preset->name);
    manifest.hyper.r = preset->r;
    manifest.hyper.n = preset->n;
  } else if (opts.r && opts.n) {
    manifest.hyper.r = *opts.r;
    manifest.hyper.n = *opts.n;
  } else {
    throw ConfigError("tune needs either --preset or both --r and --n");
  }
  manifest.hyper.validate();
  if (opts.k < 2) {
    throw ConfigError("k must be at least 2");
  }

  const auto data = load_clean_dataset(opts.input, opts.pipeline);
  const auto tracks = filter_by_type(data.tracks, manifest.vessel_type);
  if (tracks.empty()) {
    std::string available;
    for (const auto& t : vessel_types(data.tracks)) {
      available += (available.empty() ? "" : ", ") + t;
    }
    throw ConfigError("no tracks of vessel type '" + manifest.vessel_type +
                      "' (available: " + available + ")");
  }
  if (opts.k > tracks.size()) {
    throw ConfigError("k = " + std::to_string(opts.k) + " exceeds the " +
                      std::to_string(tracks.size()) + " tracks of type '" +
                      manifest.vessel_type + "'");
  }

  const auto folds = split_k_folds(tracks, opts.k);
  const auto spec = GeneSpec::standard();
  const auto& hp = manifest.hyper;

  for (std::size_t i = 0; i < folds.size(); ++i) {
    Dataset train;
    for (std::size_t j = 0; j < folds.size(); ++j) {
      if (j != i) {
        train.insert(train.end(), folds[j].begin(), folds[j].end());
      }
    }
    const auto& test = folds[i];

    FoldReport report;
    report.fold = i;
    report.train_mmsi = mmsis_of(train);
    report.test_mmsi = mmsis_of(test);
    std::vector<std::uint64_t> shared;
    std::set_intersection(report.train_mmsi.begin(), report.train_mmsi.end(),
                          report.test_mmsi.begin(), report.test_mmsi.end(),
                          std::back_inserter(shared));
    if (!shared.empty()) {
      throw std::logic_error("fold " + std::to_string(i) + " shares vessels between train and test");
    }
    report.train_points = count_points(train);
    report.test_points = count_points(test);

    auto ga = run_ga(train, spec, hp);
    report.best = ga.best;
    report.history = std::move(ga.history);
    const auto cfg = to_config(report.best.genes);
    report.test_metrics = evaluate_config(test, cfg, hp.threads);
    report.test_fitness = fitness(report.test_metrics, hp.r, hp.n);
    report.all_metrics = evaluate_config(tracks, cfg, hp.threads);
    report.all_fitness = fitness(report.all_metrics, hp.r, hp.n);
    outcome.folds.push_back(std::move(report));
  }

  for (std::size_t i = 1; i < outcome.folds.size(); ++i) {
    if (outcome.folds[i].all_fitness < outcome.folds[outcome.chosen_fold].all_fitness) {
      outcome.chosen_fold = i;
    }
  }
  outcome.chosen = to_config(outcome.folds[outcome.chosen_fold].best.genes);

  // all files are written here, after every fold has finished
  prepare_out_dir(opts.out_dir);
  write_text(opts.out_dir / "manifest.json", manifest_json(manifest));

  std::ostringstream folds_csv;
  folds_csv << "fold,train_tracks,test_tracks,train_points,test_points,train_fitness,"
               "test_rmse_m,test_ratio,test_fitness,all_folds_fitness\n";
  for (const auto& f : outcome.folds) {
    folds_csv << f.fold << ',' << f.train_mmsi.size() << ',' << f.test_mmsi.size() << ','
              << f.train_points << ',' << f.test_points << ',' << fixed(*f.best.fitness) << ','
              << fixed(f.test_metrics.rmse_m) << ',' << fixed(f.test_metrics.ratio) << ','
              << fixed(f.test_fitness) << ',' << fixed(f.all_fitness) << '\n';

    const auto dir = opts.out_dir / ("fold_" + std::to_string(f.fold));
    prepare_out_dir(dir);
    save_config(dir / "best_config.json", to_config(f.best.genes));
    write_text(dir / "history.csv", history_csv(f.history));
    std::ostringstream ids;
    ids << "role,mmsi\n";
    for (auto id : f.train_mmsi) {
      ids << "train," << id << '\n';
    }
    for (auto id : f.test_mmsi) {
      ids << "test," << id << '\n';
    }
    write_text(dir / "tracks.csv", ids.str());
  }
  write_text(opts.out_dir / "folds.csv", folds_csv.str());

  const auto& chosen = outcome.folds[outcome.chosen_fold];
  std::ostringstream summary;
  summary << "{\n"
          << "  \"vessel_type\": " << json_quote(manifest.vessel_type) << ",\n"
          << "  \"chosen_fold\": " << outcome.chosen_fold << ",\n"
          << "  \"score\": " << fixed(chosen.all_fitness) << ",\n"
          << "  \"rmse_m\": " << fixed(chosen.all_metrics.rmse_m) << ",\n"
          << "  \"ratio\": " << fixed(chosen.all_metrics.ratio) << ",\n"
          << "  \"test_mmsi\": " << json_quote(mmsi_list(chosen.test_mmsi)) << ",\n"
          << "  \"config\": " << config_json(outcome.chosen, 4) << "\n"
          << "}\n";
  write_text(opts.out_dir / "summary.json", summary.str());
  save_config(opts.out_dir / "best_config.json", outcome.chosen);
  return outcome;
}

} // namespace synopses
