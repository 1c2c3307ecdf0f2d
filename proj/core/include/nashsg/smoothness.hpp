#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nashsg/game.hpp"

namespace nashsg {

enum class SmoothnessMethod { analytic, finite_difference };

/// L of the smoothed pseudo-gradient F^eta, and D = sqrt((P_max - P_min) / L).
struct SmoothnessEstimate {
  double L = 0.0;
  SmoothnessMethod method = SmoothnessMethod::analytic;
  double D = 0.0;
  double L1_m = 0.0;  // coupling part (analytic path)
  PotentialBounds bounds;
};

/// Largest singular value of a row-major n x n matrix (power iteration on J^T J).
double spectral_norm(std::span<const double> J, std::size_t n);

/// Largest singular value of the Jacobian of F at x. The full Jacobian comes from
/// central differences along each axis.
double jacobian_norm_fd(const std::function<std::vector<double>(std::span<const double>)>& F,
                        std::span<const double> x, double fd_step);

/// L(eta) = L1_m + L_max sqrt(n_max) sqrt(N) / eta, with L1_m from the coupling Jacobian.
double analytic_smoothness(const StructuredGameModel& game, double eta);

/// Analytic path: the formula above. Finite-difference path: 2 x max over probe pairs
/// (consecutive probes and fd_step coordinate nudges) of ||F^eta(a) - F^eta(b)|| / ||a - b||.
/// D uses `bounds` (the smoothed potential's range over X).
SmoothnessEstimate estimate_smoothness(const StructuredGameModel& game, double eta, SmoothnessMethod method,
                                       const std::vector<std::vector<double>>& probe_points, double fd_step,
                                       const PotentialBounds& bounds);

/// sqrt((P_max - P_min) / L).
double potential_radius(const PotentialBounds& bounds, double L);

}  // namespace nashsg
