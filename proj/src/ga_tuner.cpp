#include "synopses/ga_tuner.hpp"

#include "synopses/error.hpp"
#include "synopses/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace synopses {

GeneSpec GeneSpec::standard() {
  GeneSpec spec{};
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    const auto& range = kConfigRanges[i];
    spec.genes[i] = {range.key, range.lower, range.upper, i == 1};
  }
  return spec;
}

double GeneSpec::clamp(std::size_t gene, double value) const {
  const auto& g = genes[gene];
  const double v = std::clamp(value, g.lower, g.upper);
  return g.integer ? std::round(v) : v;
}

Genes to_genes(const SynopsisConfig& c) {
  return {c.angle_threshold_deg,   static_cast<double>(c.buffer_size), c.gap_period_s,
          c.historical_timespan_s, c.no_speed_threshold_kn,            c.low_speed_threshold_kn,
          c.speed_ratio,           c.distance_threshold_m};
}

SynopsisConfig to_config(const Genes& g) {
  SynopsisConfig c;
  c.angle_threshold_deg = g[0];
  c.buffer_size = static_cast<int>(std::lround(g[1]));
  c.gap_period_s = g[2];
  c.historical_timespan_s = g[3];
  c.no_speed_threshold_kn = g[4];
  c.low_speed_threshold_kn = g[5];
  c.speed_ratio = g[6];
  c.distance_threshold_m = g[7];
  return c;
}

void GaHyperParams::validate() const {
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
  };
  probability(crossover_prob, "crossover_prob");
  probability(mutation_prob, "mutation_prob");
  probability(per_gene_mutation_prob, "per_gene_mutation_prob");
  if (!(r >= 0.0)) {
    throw ConfigError("r must be non-negative");
  }
  if (!std::isfinite(n)) {
    throw ConfigError("n must be finite");
  }
  if (tournament_size < 1) {
    throw ConfigError("tournament_size must be positive");
  }
  if (population_size < tournament_size) {
    throw ConfigError("population_size must be at least tournament_size");
  }
  if (max_generations < 1) {
    throw ConfigError("max_generations must be positive");
  }
  if (!(mutation_sigma_fraction >= 0.0)) {
    throw ConfigError("mutation_sigma_fraction must be non-negative");
  }
}

double fitness(const Metrics& m, double r, double n) { return std::pow(m.rmse_m + r, n) * m.ratio; }

const Individual& tournament_select(std::span<const Individual> population, std::size_t size,
                                    Rng& rng) {
  if (population.empty()) {
    throw std::invalid_argument("tournament_select: empty population");
  }
  if (std::any_of(population.begin(), population.end(),
                  [](const Individual& ind) { return !ind.fitness; })) {
    throw std::invalid_argument("tournament_select: population contains unevaluated individuals");
  }
  const std::size_t draws = std::min(std::max<std::size_t>(size, 1), population.size());
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);

  std::vector<std::size_t> drawn;
  drawn.reserve(draws);
  while (drawn.size() < draws) {
    const auto idx = pick(rng);
    if (std::find(drawn.begin(), drawn.end(), idx) == drawn.end()) {
      drawn.push_back(idx);
    }
  }
  std::size_t winner = drawn.front();
  for (auto idx : drawn) {
    if (*population[idx].fitness < *population[winner].fitness) {
      winner = idx;
    }
  }
  return population[winner];
}

std::pair<Individual, Individual> crossover_at(const Individual& a, const Individual& b,
                                               std::size_t cut) {
  if (cut < 1 || cut >= kGeneCount) {
    throw std::invalid_argument("crossover cut must lie in [1, 7]");
  }
  Individual c1;
  Individual c2;
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    c1.genes[i] = i < cut ? a.genes[i] : b.genes[i];
    c2.genes[i] = i < cut ? b.genes[i] : a.genes[i];
  }
  return {c1, c2};
}

std::pair<Individual, Individual> single_point_crossover(const Individual& a, const Individual& b,
                                                         Rng& rng) {
  std::uniform_int_distribution<std::size_t> cut(1, kGeneCount - 1);
  return crossover_at(a, b, cut(rng));
}

Individual gaussian_mutate(const Individual& ind, const GeneSpec& spec, const GaHyperParams& hp,
                           Rng& rng) {
  Individual out = ind;
  std::bernoulli_distribution touch(hp.per_gene_mutation_prob);
  bool changed = false;
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    if (!touch(rng)) {
      continue;
    }
    const auto& g = spec.genes[i];
    const double sigma = hp.mutation_sigma_fraction * (g.upper - g.lower);
    std::normal_distribution<double> noise(0.0, sigma);
    out.genes[i] = spec.clamp(i, out.genes[i] + noise(rng));
    changed = true;
  }
  if (changed) {
    out.fitness.reset();
    out.metrics.reset();
  }
  return out;
}

Individual random_individual(const GeneSpec& spec, Rng& rng) {
  Individual ind;
  for (std::size_t i = 0; i < kGeneCount; ++i) {
    const auto& g = spec.genes[i];
    if (g.integer) {
      std::uniform_int_distribution<long> draw(std::lround(g.lower), std::lround(g.upper));
      ind.genes[i] = static_cast<double>(draw(rng));
    } else {
      std::uniform_real_distribution<double> draw(g.lower, g.upper);
      ind.genes[i] = draw(rng);
    }
  }
  return ind;
}

namespace {

void evaluate_population(std::vector<Individual>& population, const Dataset& clean,
                         const GaHyperParams& hp) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].fitness) {
      pending.push_back(i);
    }
  }
  parallel_for(pending.size(), hp.threads, [&](std::size_t k) {
    auto& ind = population[pending[k]];
    const auto m = evaluate_config(clean, to_config(ind.genes));
    ind.metrics = m;
    ind.fitness = fitness(m, hp.r, hp.n);
  });
}

std::size_t best_index(const std::vector<Individual>& population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (*population[i].fitness < *population[best].fitness) {
      best = i;
    }
  }
  return best;
}

GenerationStats summarize(std::size_t generation, const Individual& best,
                          const std::vector<Individual>& population) {
  const double total =
      std::accumulate(population.begin(), population.end(), 0.0,
                      [](double acc, const Individual& ind) { return acc + *ind.fitness; });
  return {generation, *best.fitness, total / static_cast<double>(population.size()),
          best.metrics->rmse_m, best.metrics->ratio};
}

} // namespace

GaResult run_ga(const Dataset& clean, const GeneSpec& spec, const GaHyperParams& hp,
                const GenerationObserver& observer) {
  hp.validate();
  if (count_points(clean) == 0) {
    throw std::invalid_argument("run_ga: dataset has no points");
  }

  Rng rng(hp.rng_seed);
  std::vector<Individual> population;
  population.reserve(hp.population_size);
  for (std::size_t i = 0; i < hp.population_size; ++i) {
    population.push_back(random_individual(spec, rng));
  }
  evaluate_population(population, clean, hp);

  GaResult result;
  result.best = population[best_index(population)];
  result.history.push_back(summarize(0, result.best, population));
  if (observer) {
    observer(0, population);
  }

  std::bernoulli_distribution do_crossover(hp.crossover_prob);
  std::bernoulli_distribution do_mutation(hp.mutation_prob);
  std::size_t stalled = 0;

  for (std::size_t gen = 1; gen < hp.max_generations && stalled < hp.stagnation_limit; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(hp.population_size);
    for (std::size_t i = 0; i < hp.population_size; ++i) {
      offspring.push_back(tournament_select(population, hp.tournament_size, rng));
    }
    for (std::size_t i = 0; i + 1 < offspring.size(); i += 2) {
      if (do_crossover(rng)) {
        std::tie(offspring[i], offspring[i + 1]) =
            single_point_crossover(offspring[i], offspring[i + 1], rng);
      }
    }
    for (auto& ind : offspring) {
      if (do_mutation(rng)) {
        ind = gaussian_mutate(ind, spec, hp, rng);
      }
    }

    // the elite takes the first slot unchanged
    offspring.pop_back();
    offspring.insert(offspring.begin(), result.best);
    population = std::move(offspring);
    evaluate_population(population, clean, hp);

    const auto& leader = population[best_index(population)];
    if (*leader.fitness < *result.best.fitness) {
      result.best = leader;
      stalled = 0;
    } else {
      ++stalled;
    }
    result.history.push_back(summarize(gen, result.best, population));
    if (observer) {
      observer(gen, population);
    }
  }
  return result;
}

namespace {

constexpr std::array<VesselTypePreset, 6> kPresets = {{
    {"passenger", 17.0, 0.8, 30.0, 0.10},
    {"unknown", 10.0, 1.0, 15.0, 0.15},
    {"fishing", 17.0, 0.7, 30.0, 0.30},
    {"tug", 2.0, 1.6, 15.0, 0.15},
    {"cargo", 13.0, 0.8, 30.0, 0.10},
    {"military", 10.0, 1.4, 15.0, 0.15},
}};

} // namespace

std::span<const VesselTypePreset> vessel_type_presets() { return kPresets; }

std::optional<VesselTypePreset> find_preset(std::string_view name) {
  const auto key = normalize_vessel_type(name);
  const auto it = std::find_if(kPresets.begin(), kPresets.end(),
                               [&](const VesselTypePreset& p) { return p.name == key; });
  if (it == kPresets.end()) {
    return std::nullopt;
  }
  return *it;
}

std::vector<double> default_r_grid() { return {1, 2, 5, 10, 13, 17, 20}; }

std::vector<double> default_n_grid() {
  std::vector<double> grid;
  for (int tenths = 6; tenths <= 16; ++tenths) {
    grid.push_back(tenths / 10.0);
  }
  return grid;
}

HyperParamSearchResult search_hyperparams(const Dataset& clean, const GeneSpec& spec,
                                          GaHyperParams base, double rmse_threshold_m,
                                          double ratio_threshold,
                                          std::span<const double> r_grid,
                                          std::span<const double> n_grid) {
  HyperParamSearchResult out;
  for (double r : r_grid) {
    for (double n : n_grid) {
      base.r = r;
      base.n = n;
      const auto ga = run_ga(clean, spec, base);
      HyperParamCandidate cand{r, n, *ga.best.metrics, false};
      cand.meets_thresholds = cand.best_metrics.rmse_m <= rmse_threshold_m &&
                              cand.best_metrics.ratio <= ratio_threshold;
      out.tried.push_back(cand);
      if (cand.meets_thresholds) {
        out.chosen = cand;
        return out;
      }
    }
  }
  return out;
}

} // namespace synopses
