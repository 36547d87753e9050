// Command-line front end: compress, eval, compare, tune.

#include "synopses/error.hpp"
#include "synopses/format.hpp"
#include "synopses/harness.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <limits>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void add_pipeline_options(CLI::App* cmd, synopses::PipelineOptions& p) {
  cmd->add_option("--max-speed", p.filter.max_speed_knots,
                  "Noise filter speed ceiling in knots")
      ->capture_default_str();
  cmd->add_option("--max-jump", p.filter.max_coord_jump_deg,
                  "Noise filter lon/lat jump ceiling in degrees")
      ->capture_default_str();
  cmd->add_flag_callback(
      "--no-filter", [&p] { p.filter = synopses::NoiseFilterConfig::disabled(); },
      "Disable the speed and jump noise rules");
  cmd->add_option("--threads", p.threads, "Worker threads for fitness evaluation")
      ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  using namespace synopses;

  CLI::App app{"Streaming AIS trajectory synopses and per-vessel-type parameter tuning"};
  app.require_subcommand(1);

  CompressOptions compress;
  std::string compress_config;
  auto* c = app.add_subcommand("compress", "Compress tracks into annotated critical points");
  c->add_option("--input", compress.input, "AIS CSV file")->required();
  c->add_option("--config", compress_config, "Parameter JSON (defaults when omitted)");
  c->add_option("--out", compress.out_dir, "Output directory")->required();
  add_pipeline_options(c, compress.pipeline);

  fs::path eval_input;
  std::string eval_config;
  PipelineOptions eval_pipeline;
  auto* e = app.add_subcommand("eval", "Print RMSE and Ratio of one configuration");
  e->add_option("--input", eval_input, "AIS CSV file")->required();
  e->add_option("--config", eval_config, "Parameter JSON (defaults when omitted)");
  add_pipeline_options(e, eval_pipeline);

  CompareOptions compare;
  std::string config_a;
  std::string config_b;
  auto* cmp = app.add_subcommand("compare", "Evaluate two configurations on the same data");
  cmp->add_option("--input", compare.input, "AIS CSV file")->required();
  cmp->add_option("--config-a", config_a, "First parameter JSON, or 'default'")->required();
  cmp->add_option("--config-b", config_b, "Second parameter JSON, or 'default'")->required();
  cmp->add_option("--out", compare.out_dir, "Output directory")->required();
  add_pipeline_options(cmp, compare.pipeline);

  TuneOptions tune;
  std::string preset;
  double r = std::numeric_limits<double>::quiet_NaN();
  double n = std::numeric_limits<double>::quiet_NaN();
  auto* t = app.add_subcommand("tune", "Cross-validated GA tuning for one vessel type");
  t->add_option("--input", tune.input, "AIS CSV file")->required();
  t->add_option("--type", tune.vessel_type, "Vessel type label")->required();
  auto* preset_opt = t->add_option("--preset", preset, "Objective preset (vessel type name)");
  auto* r_opt = t->add_option("--r", r, "Objective offset r in meters");
  auto* n_opt = t->add_option("--n", n, "Objective exponent n");
  r_opt->excludes(preset_opt);
  n_opt->excludes(preset_opt);
  t->add_option("--k", tune.k, "Cross-validation folds")->capture_default_str();
  t->add_option("--seed", tune.hyper.rng_seed, "RNG seed")->capture_default_str();
  t->add_option("--out", tune.out_dir, "Output directory")->required();
  t->add_option("--population", tune.hyper.population_size, "Population size")
      ->capture_default_str();
  t->add_option("--generations", tune.hyper.max_generations, "Maximum generations")
      ->capture_default_str();
  t->add_option("--stagnation", tune.hyper.stagnation_limit,
                "Stop after this many generations without improvement")
      ->capture_default_str();
  add_pipeline_options(t, tune.pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto optional_path = [](const std::string& s) -> std::optional<fs::path> {
    if (s.empty() || s == "default") {
      return std::nullopt;
    }
    return fs::path(s);
  };

  try {
    if (*c) {
      compress.config = optional_path(compress_config);
      const auto out = cmd_compress(compress);
      std::cout << "compressed " << out.metrics.noiseless_count << " locations to "
                << out.synopsis_points << " critical points; rmse_m=" << fixed(out.metrics.rmse_m)
                << " ratio=" << fixed(out.metrics.ratio) << '\n';
    } else if (*e) {
      const auto out = cmd_eval(eval_input, optional_path(eval_config), eval_pipeline);
      std::cout << metrics_json(out.metrics, out.config);
    } else if (*cmp) {
      compare.config_a = optional_path(config_a);
      compare.config_b = optional_path(config_b);
      const auto out = cmd_compare(compare);
      std::cout << "A: rmse_m=" << fixed(out.a.rmse_m) << " ratio=" << fixed(out.a.ratio) << '\n'
                << "B: rmse_m=" << fixed(out.b.rmse_m) << " ratio=" << fixed(out.b.ratio) << '\n';
    } else if (*t) {
      if (*preset_opt) {
        tune.preset = preset;
      }
      if (*r_opt) {
        tune.r = r;
      }
      if (*n_opt) {
        tune.n = n;
      }
      tune.hyper.threads = tune.pipeline.threads;
      const auto out = cmd_tune(tune);
      const auto& best = out.folds[out.chosen_fold];
      std::cout << "type " << out.manifest.vessel_type << ": chose fold " << out.chosen_fold
                << " score=" << fixed(best.all_fitness) << " rmse_m=" << fixed(best.all_metrics.rmse_m)
                << " ratio=" << fixed(best.all_metrics.ratio) << '\n';
    }
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
