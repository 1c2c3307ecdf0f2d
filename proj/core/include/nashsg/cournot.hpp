#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nashsg/game.hpp"

namespace nashsg {

/// Stochastic Cournot game with nonconvex piecewise-linear production cost.
///
/// Player i (1-based) pays c~_i(xi) g(x_i) with c~_i(xi) = (cost_base + i cost_step) xi,
/// g(x) = min{x, x/2 + 2}, and earns p~(xbar, xi) x_i with p~ = a_coef xi - b_coef xi xbar,
/// xi ~ U[noise_lo, noise_hi]. Defaults are the six-player benchmark.
struct CournotParams {
  std::size_t players = 6;
  double upper = 12.0;
  double cost_base = 5.0;
  double cost_step = 1.0 / 48.0;  // 1/(8N) for N = 6
  double a_coef = 4.0;
  double b_coef = 0.02;
  double noise_lo = 0.0;
  double noise_hi = 1.0;
  /// Replace g by the identity (smooth variant).
  bool linear_cost = false;
};

/// Two-stage Cournot game: leader i picks x_i, its follower picks y_i on the
/// residual market. Leader cost (5 + xi) log(x_i + 1), follower cost (1 + 0.2 xi) y_i,
/// p~(u, xi) = a(xi) - b(xi) u with a = 2 xi + 8, b = 0.01 xi + 0.02, xi ~ U[-1, 1].
struct HierarchicalCournotParams {
  std::size_t players = 4;
  double upper = 20.0;
  double follower_upper = 200.0;
  double leader_cost_base = 5.0;
  double leader_cost_noise = 1.0;
  double follower_cost_base = 1.0;
  double follower_cost_noise = 0.2;
  double a_base = 8.0;
  double a_noise = 2.0;
  double b_base = 0.02;
  double b_noise = 0.01;
  double noise_lo = -1.0;
  double noise_hi = 1.0;
};

std::shared_ptr<const StructuredGameModel> cournot_nonsmooth_model(const CournotParams& p = {});
/// Potential sum_i cbar_i g(x_i) - abar sum x + bbar sum x^2 + bbar sum_{i<j} x_i x_j.
PotentialOracle cournot_potential(const CournotParams& p = {});

/// Smooth (g = identity) variant as a first-order game.
std::shared_ptr<const SmoothGameModel> cournot_smooth_model(CournotParams p = {});

std::shared_ptr<const HierarchicalGameModel> cournot_hierarchical_model(const HierarchicalCournotParams& p = {});
/// Potential sum C_i + bbar sum x_i y_i(x_i) - abar sum x + bbar sum x^2 + bbar sum_{i<j} x_i x_j.
PotentialOracle hierarchical_potential(const HierarchicalCournotParams& p = {});

/// Model plus its potential and the benchmark's starting point.
struct GameBundle {
  std::string name;
  std::shared_ptr<const SmoothGameModel> smooth;
  std::shared_ptr<const StructuredGameModel> structured;
  std::shared_ptr<const HierarchicalGameModel> hierarchical;
  PotentialOracle potential;
  std::vector<double> default_x0;
};

/// "cournot6": the nonsmooth six-player game, x0 = 12 e.
GameBundle cournot_nonsmooth();
/// "cournot6-smooth": g = identity with a = 8 xi, b = 0.1 xi so the equilibrium is interior.
GameBundle cournot_smooth();
/// "hier4": the hierarchical game (structured = exact-follower reduction), x0 = 19 e.
GameBundle cournot_hierarchical();

/// Registered names: "cournot6", "cournot6-smooth", "hier4".
std::vector<std::string> known_games();
/// Throws ConfigError listing the known names when `name` is not registered.
GameBundle make_game(const std::string& name);

}  // namespace nashsg
