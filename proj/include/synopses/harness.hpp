#pragma once

#include "synopses/ais_ingest.hpp"
#include "synopses/evaluation.hpp"
#include "synopses/ga_tuner.hpp"
#include "synopses/noise_filter.hpp"
#include "synopses/synopses_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synopses {

namespace fs = std::filesystem;

// --- configuration files -----------------------------------------------------

/// Parses a flat JSON object with any subset of the eight parameter keys;
/// missing keys keep their defaults. Unknown keys, non-numeric values and
/// out-of-range values throw ConfigError.
SynopsisConfig parse_config_json(std::string_view text);

/// Throws ConfigError naming the path when the file is missing.
SynopsisConfig load_config(const fs::path& path);

void save_config(const fs::path& path, const SynopsisConfig& cfg);

// --- shared pipeline -----------------------------------------------------------

struct PipelineOptions {
  ColumnMapping columns;
  NoiseFilterConfig filter;
  unsigned threads = 1;
};

struct CleanDataset {
  Dataset tracks;
  ParseReport parse;
  std::size_t noise_rejected = 0;
};

/// Parse, partition per vessel and noise-filter one input file.
CleanDataset load_clean_dataset(const fs::path& input, const PipelineOptions& opts);

// --- commands ------------------------------------------------------------------

struct CompressOptions {
  fs::path input;
  std::optional<fs::path> config; // built-in defaults when absent
  fs::path out_dir;
  PipelineOptions pipeline;
};

struct CompressOutcome {
  SynopsisConfig config;
  Metrics metrics;
  std::size_t synopsis_points = 0;
};

/// Writes <out>/synopses.csv and <out>/metrics.json.
CompressOutcome cmd_compress(const CompressOptions& opts);

struct EvalOutcome {
  SynopsisConfig config;
  Metrics metrics;
};

EvalOutcome cmd_eval(const fs::path& input, const std::optional<fs::path>& config,
                     const PipelineOptions& pipeline);

struct CompareOptions {
  fs::path input;
  std::optional<fs::path> config_a; // defaults when absent
  std::optional<fs::path> config_b;
  fs::path out_dir;
  PipelineOptions pipeline;
};

struct Comparison {
  SynopsisConfig config_a;
  SynopsisConfig config_b;
  Metrics a;
  Metrics b;
};

/// Writes <out>/comparison.json and <out>/comparison_plot.csv (one row per
/// config per metric).
Comparison cmd_compare(const CompareOptions& opts);

/// Everything needed to repeat a tuning run.
struct RunManifest {
  std::string command;
  std::string input;
  std::string vessel_type;
  std::string preset; // empty when r and n were given directly
  std::size_t k = 6;
  GaHyperParams hyper;
};

std::string manifest_json(const RunManifest& m);

struct TuneOptions {
  fs::path input;
  std::string vessel_type;
  std::optional<std::string> preset;
  std::optional<double> r;
  std::optional<double> n;
  std::size_t k = 6;
  GaHyperParams hyper; // r and n are overwritten from preset or r/n
  fs::path out_dir;
  PipelineOptions pipeline;
};

struct FoldReport {
  std::size_t fold = 0;
  std::vector<std::uint64_t> train_mmsi;
  std::vector<std::uint64_t> test_mmsi;
  std::size_t train_points = 0;
  std::size_t test_points = 0;
  Individual best;
  Metrics test_metrics;
  double test_fitness = 0.0;
  Metrics all_metrics;      // best config on every fold of the type
  double all_fitness = 0.0; // score used to choose the summary config
  std::vector<GenerationStats> history;
};

struct TuneOutcome {
  RunManifest manifest;
  std::vector<FoldReport> folds;
  std::size_t chosen_fold = 0;
  SynopsisConfig chosen;
};

/// Per-type k-fold cross-validated tuning. For each fold the GA trains on
/// the other k-1 folds and its best configuration is scored on the held-out
/// one. The summary keeps the fold winner with the lowest objective over
/// all folds together. Output layout under out_dir:
///   manifest.json, folds.csv, summary.json, best_config.json,
///   fold_<i>/{best_config.json,history.csv,tracks.csv}
TuneOutcome cmd_tune(const TuneOptions& opts);

} // namespace synopses
