#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace nashsg {

/// Closed interval [lo, hi] of reals (used for 1-D subdifferentials).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  double distance_to(double v) const;
};

/// Continuous piecewise-linear function on R.
///
/// `breakpoints` b_1 < ... < b_m split R into m+1 segments with `slopes`
/// s_0, ..., s_m; the function takes `anchor_value` at `anchor`.
class PiecewiseLinear1D {
 public:
  PiecewiseLinear1D(std::vector<double> breakpoints, std::vector<double> slopes,
                    double anchor = 0.0, double anchor_value = 0.0);

  /// min{x, x/2 + 2} style two-piece function scaled by `scale`.
  static PiecewiseLinear1D min_of_lines(double slope_a, double icpt_a, double slope_b, double icpt_b,
                                        double scale = 1.0);

  double operator()(double x) const;
  /// Slope of the segment containing x (right derivative at a breakpoint).
  double slope_at(double x) const;
  /// Exact integral over [a, b], a <= b.
  double integral(double a, double b) const;
  /// Clarke subdifferential: the slope off breakpoints, the slope hull at one.
  Interval clarke(double x) const;
  /// Hull of slopes of all segments meeting [a, b].
  Interval slope_hull(double a, double b) const;
  /// max |s_j|.
  double lipschitz() const;
  /// Same function multiplied by c.
  PiecewiseLinear1D scaled(double c) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  std::size_t segment(double x) const;
  /// Antiderivative with F(anchor) = 0.
  double antiderivative(double x) const;

  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<double> knot_values_;  // f at each breakpoint
  std::vector<double> knot_prims_;   // antiderivative at each breakpoint, relative to knot 0
  double anchor_ = 0.0;
  double anchor_value_ = 0.0;
};

}  // namespace nashsg
