#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nashsg/game.hpp"
#include "nashsg/random.hpp"

namespace nashsg {

enum class OutputRule {
  uniform,        // P_R(k) = 1/T
  step_weighted,  // P_R(k) proportional to gamma_k - L gamma_k^2
};

enum class FollowerMode {
  sa,     // inexact follower from the SA scheme
  exact,  // closed-form follower (zero-bias idealization)
};

struct LowerLevelConfig {
  double alpha0 = 0.0;      // <= 0 selects 1 / mu_i
  double Gamma = 1.0;
  double delta = 0.1;       // t_k = ceil((k+1)^(1+delta))
  std::size_t t_fixed = 0;  // > 0 overrides the schedule with a constant t
  FollowerMode mode = FollowerMode::sa;
};

struct SolverConfig {
  double eta = 0.0;             // smoothing radius; 0 for RSG
  double gamma = 0.0;           // constant step, used when `gammas` is empty
  std::vector<double> gammas;   // explicit gamma_1..gamma_T (fixes T)
  std::size_t batch = 1;        // S
  std::size_t max_iters = 0;    // cap on T; 0 means no cap
  std::uint64_t budget = 0;     // M: first-order budget M, zeroth-order 2M; 0 means unlimited
  std::uint64_t ll_budget = 0;  // lower-level SA steps; 0 means unlimited
  OutputRule output_rule = OutputRule::uniform;
  double L = 0.0;               // smoothness constant, needed by step_weighted
  LowerLevelConfig lower;

  std::uint64_t seed = 0;
  std::uint32_t path = 0;
  std::vector<double> x0;       // empty: midpoint of X

  /// Run all T iterations instead of stopping at R (x_R is still recorded).
  bool full_trace = false;
  /// Evaluated on x^0 and then every `metric_stride` iterations (and at the last one).
  std::function<double(std::span<const double>)> metric;
  std::size_t metric_stride = 1;
  /// Order in which players are visited inside an iteration; empty means 0..N-1.
  std::vector<std::size_t> player_order;
  /// Keep x^k for k divisible by this (0: none).
  std::size_t snapshot_every = 0;
};

struct TracePoint {
  std::size_t k = 0;
  std::uint64_t zo = 0;  // cumulative zeroth-order calls after k iterations
  std::uint64_t fo = 0;
  std::uint64_t ll = 0;
  double value = 0.0;
};

struct RunRecord {
  std::vector<TracePoint> trace;
  std::vector<std::pair<std::size_t, std::vector<double>>> iterates;
  std::uint64_t zo_samples = 0;
  std::uint64_t fo_samples = 0;
  std::uint64_t ll_samples = 0;
  std::size_t T = 0;           // planned iterations
  std::size_t iterations = 0;  // executed iterations
  std::size_t R = 0;
  bool truncated = false;      // a budget ran out before R; R was redrawn over the completed iterations
  std::vector<double> x_R;
  std::vector<double> x_last;
};

/// S = ceil(sigma sqrt(6M) / (4 L D)), at least 1.
std::size_t batch_size_from_budget(double M, double sigma, double L, double D);
/// floor(M / (N S)).
std::size_t iterations_from_budget(std::uint64_t M, std::size_t players, std::size_t S);

/// sqrt(32 sqrt(2 pi) L_max^2 n_max + 2 sigma_m^2).
double rs_sigma(double L_max, std::size_t n_max, double sigma_m2);
/// sqrt(4 n_max^2 (L^y)^2 eps_up / eta^2 + 64 sqrt(2 pi) L_max^2 n_max + 2 sigma_m^2).
double hierarchical_sigma(double L_max, double Ly_max, std::size_t n_max, double eps_up, double eta,
                          double sigma_m2);
/// max{(c_F^2 + v^2) alpha0^2 / (2 mu alpha0 - 1), Gamma sup||y0 - y||^2} / (t + Gamma).
double sa_inexactness(double c_F, double v2, double alpha0, double mu, double Gamma, double sup_dist_sq, double t);
/// The same bound for player i of a game, with y0 the midpoint of Y_i.
double sa_inexactness(const HierarchicalGameModel& game, std::size_t i, const LowerLevelConfig& cfg, double t);
/// t_k for upper iteration k (0-based).
std::size_t lower_iterations(const LowerLevelConfig& cfg, std::size_t k);

/// Projected SA on the follower VI of player i at leader point x_hat, t >= 1 steps from the
/// midpoint of Y_i, alpha_t = alpha0 / (t + Gamma).
std::vector<double> sa_lower_solve(const HierarchicalGameModel& game, std::size_t i,
                                   std::span<const double> x_hat, std::size_t t, const LowerLevelConfig& cfg,
                                   RandomStream& stream);
void sa_lower_solve(const HierarchicalGameModel& game, std::size_t i, std::span<const double> x_hat,
                    std::size_t t, const LowerLevelConfig& cfg, RandomStream& stream, std::span<double> y);

RunRecord rsg_run(const SmoothGameModel& game, const SolverConfig& cfg);
RunRecord rs_rsg_run(const StructuredGameModel& game, const SolverConfig& cfg);
RunRecord b_rs_rsg_run(const HierarchicalGameModel& game, const SolverConfig& cfg);

}  // namespace nashsg
