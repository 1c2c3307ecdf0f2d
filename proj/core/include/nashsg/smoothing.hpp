#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nashsg/game.hpp"
#include "nashsg/piecewise_linear.hpp"
#include "nashsg/random.hpp"

namespace nashsg {

/// One draw of the two-point estimator (n / 2 eta)(h(x + v) - h(x - v)) v / ||v||.
struct TwoPointEstimate {
  std::vector<double> value;
  std::vector<double> direction;  // v, ||v|| = eta
  double f_plus = 0.0;
  double f_minus = 0.0;
};

/// Scalar field evaluated at a perturbed block. The caller binds the noise
/// draw, so both evaluations of one estimate see the same xi.
using BlockFunction = std::function<double(std::span<const double>)>;

/// Draws v uniformly on the eta-sphere from `dir_stream` and forms the estimate.
TwoPointEstimate two_point_gradient(const BlockFunction& h, std::span<const double> x, double eta,
                                    RandomStream& dir_stream);

/// Same, for player i of a structured game with a fixed noise sample xi.
TwoPointEstimate two_point_gradient(const StructuredGameModel& game, std::size_t i,
                                    std::span<const double> x_i, double eta, NoiseSample xi,
                                    RandomStream& dir_stream);

/// Interval average f^eta(x) = (1/2eta) int_{x-eta}^{x+eta} f and its derivative, exact
/// for a piecewise-linear f.
class Smoothed1D {
 public:
  Smoothed1D(PiecewiseLinear1D f, double eta);

  double value(double x) const;
  double grad(double x) const;
  double eta() const { return eta_; }

 private:
  PiecewiseLinear1D f_;
  double eta_;
};

Smoothed1D smooth_1d_closed_form(const PiecewiseLinear1D& f, double eta);

/// grad h_i^eta at a scalar block. Exact for n_i = 1: (h(x+eta) - h(x-eta)) / (2 eta).
/// Throws MissingOracle for n_i > 1 or when the game has no analytic h.
double smoothed_private_gradient(const StructuredGameModel& game, std::size_t i, double x_i, double eta);

/// h_i^eta at a scalar block: exact for piecewise-linear h, Gauss-Legendre otherwise.
double smoothed_private_cost(const StructuredGameModel& game, std::size_t i, double x_i, double eta);

/// Composite Gauss-Legendre rule on [a, b] (8 nodes per panel).
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 32);

}  // namespace nashsg
