#pragma once

#include "synopses/ais_ingest.hpp"
#include "synopses/evaluation.hpp"
#include "synopses/synopses_engine.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synopses {

inline constexpr std::size_t kGeneCount = 8;

using Rng = std::mt19937_64;

struct GeneBounds {
  std::string_view name;
  double lower;
  double upper;
  bool integer;
};

/// Genes in the order (angle, buffer, gap, timespan, v_min, v_theta, alpha,
/// distance); only the buffer size is integer valued.
struct GeneSpec {
  std::array<GeneBounds, kGeneCount> genes;

  /// Bounds taken from kConfigRanges.
  static GeneSpec standard();

  double clamp(std::size_t gene, double value) const;
};

using Genes = std::array<double, kGeneCount>;

struct Individual {
  Genes genes{};
  std::optional<double> fitness;
  std::optional<Metrics> metrics;
};

Genes to_genes(const SynopsisConfig& cfg);
SynopsisConfig to_config(const Genes& genes);

struct GaHyperParams {
  double r = 10.0;  // meters added to RMSE before exponentiation
  double n = 1.0;   // exponent on (RMSE + r)
  std::size_t population_size = 50;
  std::size_t max_generations = 30; // generations evaluated, the random initial one included
  std::size_t stagnation_limit = 10;
  std::size_t tournament_size = 3;
  double crossover_prob = 0.4;
  double mutation_prob = 0.8;
  double per_gene_mutation_prob = 0.5;
  double mutation_sigma_fraction = 0.1;
  std::uint64_t rng_seed = 42;
  unsigned threads = 1;

  /// Throws ConfigError on out-of-range probabilities or sizes.
  void validate() const;
};

/// Objective to minimize: (RMSE + r)^n * Ratio.
double fitness(const Metrics& m, double r, double n);

/// Best of `size` distinct individuals drawn uniformly (all of them when the
/// population is smaller). Throws std::invalid_argument on an empty
/// population or when any member has no fitness.
const Individual& tournament_select(std::span<const Individual> population, std::size_t size,
                                    Rng& rng);

/// Children a[0,cut)+b[cut,8) and b[0,cut)+a[cut,8). Requires 1 <= cut <= 7.
std::pair<Individual, Individual> crossover_at(const Individual& a, const Individual& b,
                                               std::size_t cut);

/// crossover_at with cut uniform in [1, 7].
std::pair<Individual, Individual> single_point_crossover(const Individual& a, const Individual& b,
                                                         Rng& rng);

/// Adds N(0, sigma_fraction * range) to each gene with per_gene_mutation_prob,
/// then clamps and rounds integer genes. Clears the fitness when any gene
/// was touched.
Individual gaussian_mutate(const Individual& ind, const GeneSpec& spec, const GaHyperParams& hp,
                           Rng& rng);

/// Uniform sample inside the bounds.
Individual random_individual(const GeneSpec& spec, Rng& rng);

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0; // best so far
  double mean_fitness = 0.0; // over the current population
  double best_rmse = 0.0;
  double best_ratio = 0.0;
};

struct GaResult {
  Individual best;
  std::vector<GenerationStats> history;
};

/// Called once per evaluated generation with the full population.
using GenerationObserver = std::function<void(std::size_t, std::span<const Individual>)>;

/// Generational GA with elitism of one. Deterministic for a given seed:
/// all random draws happen on one sequential stream and fitness evaluation
/// itself is deterministic, so thread count does not change the result.
GaResult run_ga(const Dataset& clean, const GeneSpec& spec, const GaHyperParams& hp,
                const GenerationObserver& observer = {});

/// Per-type objective presets: r, n and the RMSE/Ratio thresholds used to
/// pick them.
struct VesselTypePreset {
  std::string_view name;
  double r;
  double n;
  double rmse_threshold_m;
  double ratio_threshold;
};

std::span<const VesselTypePreset> vessel_type_presets();
std::optional<VesselTypePreset> find_preset(std::string_view name);

struct HyperParamCandidate {
  double r = 0.0;
  double n = 0.0;
  Metrics best_metrics;
  bool meets_thresholds = false;
};

struct HyperParamSearchResult {
  std::optional<HyperParamCandidate> chosen; // first candidate meeting both thresholds
  std::vector<HyperParamCandidate> tried;
};

std::vector<double> default_r_grid();
std::vector<double> default_n_grid();

/// Trains the GA for each (r, n) on the grid, r outer and n inner, and
/// stops at the first combination whose best individual has RMSE and Ratio
/// within the thresholds.
HyperParamSearchResult search_hyperparams(const Dataset& clean, const GeneSpec& spec,
                                          GaHyperParams base, double rmse_threshold_m,
                                          double ratio_threshold,
                                          std::span<const double> r_grid,
                                          std::span<const double> n_grid);

} // namespace synopses
