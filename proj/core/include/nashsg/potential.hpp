#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "nashsg/game.hpp"
#include "nashsg/sets.hpp"

namespace nashsg {

/// |[P(a_i, x_{-i}) - P(b_i, x_{-i})] - [f_i(a_i, x_{-i}) - f_i(b_i, x_{-i})]|, with x = (a_i, x_{-i})
/// given and b_i substituted into block i.
double potential_identity_gap(const StructuredGameModel& game, const PotentialOracle& P, std::size_t i,
                              std::span<const double> x, std::span<const double> b_i);
double potential_identity_gap(const SmoothGameModel& game, const PotentialOracle& P, std::size_t i,
                              std::span<const double> x, std::span<const double> b_i);

/// max_i || central difference of P along block i - grad_{x_i} f_i(x) ||_inf.
/// Requires x at least fd_step inside X and away from kinks of h.
double potential_gradient_check(const SmoothGameModel& game, const PotentialOracle& P,
                                std::span<const double> x, double fd_step);
double potential_gradient_check(const StructuredGameModel& game, const PotentialOracle& P,
                                std::span<const double> x, double fd_step);

/// Grid max/min of P over the box, refined by compass search from the best grid points.
/// Throws BudgetError when points_per_dim^dim exceeds `max_grid`.
PotentialBounds estimate_potential_bounds(const PotentialOracle& P, const BoxSet& box,
                                          std::size_t points_per_dim, std::size_t max_grid = 20'000'000);

/// Potential of the eta-smoothed game: P - sum_i h_i + sum_i h_i^eta (scalar blocks only).
PotentialOracle smoothed_potential(std::shared_ptr<const StructuredGameModel> game, const PotentialOracle& P,
                                   double eta);

}  // namespace nashsg
