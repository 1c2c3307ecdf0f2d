#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nashsg/game.hpp"
#include "nashsg/piecewise_linear.hpp"
#include "nashsg/sets.hpp"

namespace nashsg {

/// Residual statistics. `per_path` holds one squared residual per sample path
/// (or per Monte Carlo batch); mean_sq is their mean, std_err its standard error.
struct ResidualReport {
  double mean_sq = 0.0;
  double std_err = 0.0;
  std::vector<double> per_path;
  double gamma = 0.0;
  std::size_t samples = 0;  // oracle draws behind F (0 when F is exact)
};

ResidualReport summarize(std::vector<double> per_path, double gamma, std::size_t samples = 0);

/// G_gamma(x) = (x - Pi_X[x - gamma F]) / gamma.
std::vector<double> projected_residual(std::span<const double> x, std::span<const double> F, const BoxSet& box,
                                       double gamma);
double projected_residual_sq(std::span<const double> x, std::span<const double> F, const BoxSet& box,
                             double gamma);

/// Where F comes from in vi_residual: the exact oracle, or a mean of `samples` sampled draws.
struct GradientSource {
  bool exact = true;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static GradientSource analytic() { return {}; }
  static GradientSource monte_carlo(std::size_t samples, std::uint64_t seed) { return {false, samples, seed}; }
};

ResidualReport vi_residual(const SmoothGameModel& game, std::span<const double> x, double gamma,
                           GradientSource source = GradientSource::analytic());
/// Structured game with F built from the analytic gradients (right slope at a kink of h).
ResidualReport vi_residual(const StructuredGameModel& game, std::span<const double> x, double gamma);

/// F^eta(x): closed-form grad h_i^eta plus the exact coupling gradient (scalar blocks).
std::vector<double> smoothed_pseudo_gradient(const StructuredGameModel& game, std::span<const double> x,
                                             double eta);

/// ||G^eta_gamma(x)||^2. Scalar blocks use the closed form; other blocks fall back to
/// `mc_samples` two-point draws, with the standard error taken over 10 batches.
ResidualReport smoothed_residual(const StructuredGameModel& game, std::span<const double> x, double gamma,
                                 double eta, std::size_t mc_samples = 100'000, std::uint64_t seed = 0);

/// dist(0, G_gamma(x))^2 over the Clarke subdifferentials of piecewise-linear h_i.
/// Throws MissingOracle when some h_i has no piecewise-linear form.
double clarke_residual(const StructuredGameModel& game, std::span<const double> x, double gamma);

/// Convex hull of Clarke subdifferentials of f over [x - eta, x + eta].
Interval delta_clarke(const PiecewiseLinear1D& f, double x, double eta);
/// One-sided deviation D(delta-Clarke(x), Clarke(x)) = sup over the first of the distance to the second.
double deviation_bound(const PiecewiseLinear1D& f, double x, double eta);

}  // namespace nashsg
