#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nashsg/solvers.hpp"

namespace nashsg {

enum class SolverKind { rsg, rs_rsg, b_rs_rsg };
enum class MetricMode {
  iterate,       // ||G(x^k)||^2
  running_mean,  // mean of ||G(x^j)||^2 over j = 1..k, i.e. E||G(x^R)||^2 for R uniform on {1..k}
};

/// Parsed experiment file. `std::nullopt` fields are derived from theory at run time.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string game;
  SolverKind solver = SolverKind::rs_rsg;
  std::vector<double> eta_sweep;
  std::vector<double> thresholds{1e-2};
  std::uint64_t budget = 1'000'000;  // M
  std::uint64_t ll_budget = 0;       // lower-level steps per path, 0 = unlimited
  std::size_t paths = 10;
  std::uint64_t seed = 42;
  std::optional<std::size_t> batch;  // S
  std::size_t max_iters = 0;
  std::optional<double> gamma;       // default 1/(2L)
  bool numeric_smoothness = false;
  OutputRule output_rule = OutputRule::uniform;
  std::vector<double> x0;            // empty: the game's default start; one value is broadcast
  LowerLevelConfig lower;
  std::optional<std::size_t> stride;  // default max(1, T/500)
  MetricMode metric = MetricMode::iterate;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = ".";
};

/// Every key with the value in effect, defaults included (echoed into the metadata file).
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);

/// Reads a flat `key = value` file ('#' starts a comment). Throws ConfigError with the
/// line number for syntax errors and the field name for invalid values.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
/// Checks cross-field invariants (decreasing thresholds, paths >= 1, known game, ...).
void validate(const ExperimentConfig& cfg);

/// Constants derived for one eta before the runs start.
struct RunPlan {
  double eta = 0.0;
  double L = 0.0;
  double D = 0.0;
  double sigma = 0.0;
  double eps_up = 0.0;  // hierarchical only
  PotentialBounds bounds;
  std::size_t S = 1;
  std::size_t T = 0;
  double gamma = 0.0;
  std::size_t stride = 1;
  double initial_residual = 0.0;
};

struct TraceRow {
  double eta = 0.0;
  std::size_t path = 0;
  std::size_t k = 0;
  std::uint64_t zo = 0, fo = 0, ll = 0;
  double residual_sq = 0.0;
};

struct TableRow {
  double eta = 0.0;
  double threshold = 0.0;
  std::optional<std::size_t> iters;  // first crossing on the path-averaged curve; empty if never
  std::uint64_t zo = 0, fo = 0, ll = 0;
};

struct PathFailure {
  double eta = 0.0;
  std::size_t path = 0;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunPlan> plans;
  std::vector<TraceRow> trace;
  std::vector<TableRow> table;
  std::vector<PathFailure> failures;
  /// Path-averaged full-resolution curve per eta (index k).
  std::vector<std::vector<double>> mean_curve;
  std::filesystem::path trace_file, table_file, meta_file;
};

RunPlan plan_run(const ExperimentConfig& cfg, double eta);
/// Runs every (eta, path) pair on up to cfg.jobs threads, merges in (eta, path) order, and
/// writes <out_dir>/<name>_trace.csv, _table.csv and _meta.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// First k with curve[k] <= threshold.
std::optional<std::size_t> first_crossing(const std::vector<double>& curve, double threshold);

std::string format_double(double v);
std::string solver_name(SolverKind s);

}  // namespace nashsg
