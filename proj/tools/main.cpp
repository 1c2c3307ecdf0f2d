// nashsg command-line driver: run experiments, the verification suite, list games.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/harness.hpp"
#include "nashsg/verify.hpp"

namespace {

enum Exit { ok = 0, validation = 1, runtime = 2, verify_failure = 3 };

int run_command(const std::string& config, const std::optional<std::uint64_t>& seed,
                const std::optional<std::size_t>& paths, const std::optional<std::size_t>& jobs,
                const std::optional<std::string>& out_dir) {
  nashsg::ExperimentConfig cfg;
  try {
    cfg = nashsg::load_config(config);
    if (seed) cfg.seed = *seed;
    if (paths) cfg.paths = *paths;
    if (jobs) cfg.jobs = *jobs;
    if (out_dir) {
      cfg.out_dir = *out_dir;
    } else if (const char* env = std::getenv("NASHSG_OUT_DIR"); env && *env) {
      cfg.out_dir = env;
    }
    nashsg::validate(cfg);
  } catch (const nashsg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return validation;
  }
  try {
    const auto res = nashsg::run_experiment(cfg);
    for (const auto& f : res.failures)
      std::cerr << "path " << f.path << " (eta " << nashsg::format_double(f.eta) << ") failed: " << f.error << "\n";
    for (const auto& row : res.table) {
      std::cout << "eta " << nashsg::format_double(row.eta) << "  threshold " << nashsg::format_double(row.threshold)
                << "  iters " << (row.iters ? std::to_string(*row.iters) : std::string("NA")) << "\n";
    }
    std::cout << "wrote " << res.trace_file.string() << ", " << res.table_file.string() << ", "
              << res.meta_file.string() << "\n";
    return res.failures.empty() ? ok : runtime;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return runtime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gradient solvers for nonsmooth potential games"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config and write trace/table CSVs");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths, jobs;
  std::optional<std::string> out_dir;
  run->add_option("--config", config, "Experiment file (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--paths", paths, "Override the number of sample paths");
  run->add_option("--jobs", jobs, "Concurrent paths");
  run->add_option("--out-dir", out_dir, "Output directory (default: $NASHSG_OUT_DIR, then the config)");

  auto* verify = app.add_subcommand("verify", "Run the property checks and print measured vs bound");
  std::uint64_t verify_seed = nashsg::VerifyOptions{}.seed;
  double l0_scale = 1.0;
  verify->add_option("--seed", verify_seed, "Seed for the checks");
  verify->add_option("--l0-scale", l0_scale, "Scale L0 in the moment check (negative control)")->group("");

  app.add_subcommand("list-games", "List registered benchmark games");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  if (*run) return run_command(config, seed, paths, jobs, out_dir);
  if (*verify) {
    try {
      const auto results = nashsg::verify_suite({verify_seed, l0_scale}, std::cout);
      const bool pass = nashsg::all_passed(results);
      std::cout << (pass ? "all checks passed" : "some checks FAILED") << "\n";
      return pass ? ok : verify_failure;
    } catch (const std::exception& e) {
      std::cerr << "verify aborted: " << e.what() << "\n";
      return runtime;
    }
  }
  for (const auto& name : nashsg::known_games()) std::cout << name << "\n";
  return ok;
}
