#include "nashsg/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "nashsg/error.hpp"

namespace nashsg {

double Interval::distance_to(double v) const {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

PiecewiseLinear1D::PiecewiseLinear1D(std::vector<double> breakpoints, std::vector<double> slopes,
                                     double anchor, double anchor_value)
    : breakpoints_(std::move(breakpoints)),
      slopes_(std::move(slopes)),
      anchor_(anchor),
      anchor_value_(anchor_value) {
  if (slopes_.size() != breakpoints_.size() + 1) {
    throw DimensionError("PiecewiseLinear1D: need one more slope than breakpoints");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()) ||
      std::adjacent_find(breakpoints_.begin(), breakpoints_.end()) != breakpoints_.end()) {
    throw DomainError("PiecewiseLinear1D: breakpoints must be strictly increasing");
  }
  // Values at the knots, propagated from the anchor through the slopes.
  knot_values_.resize(breakpoints_.size());
  if (!breakpoints_.empty()) {
    const std::size_t a = segment(anchor_);
    // Knot a-1 is the left end of the anchor segment, knot a the right end.
    for (std::size_t j = a; j < breakpoints_.size(); ++j) {
      const double from = (j == a) ? anchor_ : breakpoints_[j - 1];
      const double base = (j == a) ? anchor_value_ : knot_values_[j - 1];
      knot_values_[j] = base + slopes_[j] * (breakpoints_[j] - from);
    }
    for (std::size_t j = a; j-- > 0;) {
      const double from = (j + 1 == a) ? anchor_ : breakpoints_[j + 1];
      const double base = (j + 1 == a) ? anchor_value_ : knot_values_[j + 1];
      knot_values_[j] = base - slopes_[j + 1] * (from - breakpoints_[j]);
    }
    knot_prims_.resize(breakpoints_.size());
    knot_prims_[0] = 0.0;
    for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
      knot_prims_[j] = knot_prims_[j - 1] + 0.5 * (knot_values_[j - 1] + knot_values_[j]) *
                                                (breakpoints_[j] - breakpoints_[j - 1]);
    }
  }
}

PiecewiseLinear1D PiecewiseLinear1D::min_of_lines(double slope_a, double icpt_a, double slope_b,
                                                  double icpt_b, double scale) {
  if (slope_a == slope_b) throw DomainError("min_of_lines: parallel lines");
  const double cross = (icpt_b - icpt_a) / (slope_a - slope_b);
  const double value = slope_a * cross + icpt_a;
  const double left = std::max(slope_a, slope_b);
  const double right = std::min(slope_a, slope_b);
  return PiecewiseLinear1D({cross}, {scale * left, scale * right}, cross, scale * value);
}

std::size_t PiecewiseLinear1D::segment(double x) const {
  return static_cast<std::size_t>(
      std::distance(breakpoints_.begin(), std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x)));
}

double PiecewiseLinear1D::operator()(double x) const {
  if (breakpoints_.empty()) return anchor_value_ + slopes_[0] * (x - anchor_);
  const std::size_t j = segment(x);
  if (j == 0) return knot_values_[0] + slopes_[0] * (x - breakpoints_[0]);
  return knot_values_[j - 1] + slopes_[j] * (x - breakpoints_[j - 1]);
}

double PiecewiseLinear1D::slope_at(double x) const { return slopes_[segment(x)]; }

double PiecewiseLinear1D::antiderivative(double x) const {
  if (breakpoints_.empty()) {
    const double d = x - anchor_;
    return anchor_value_ * d + 0.5 * slopes_[0] * d * d;
  }
  const std::size_t j = segment(x);
  const std::size_t k = (j == 0) ? 0 : j - 1;  // nearest knot at or left of x (knot 0 if none)
  const double b = breakpoints_[k];
  const double fb = knot_values_[k];
  const double d = x - b;
  return knot_prims_[k] + fb * d + 0.5 * slopes_[j] * d * d;
}

double PiecewiseLinear1D::integral(double a, double b) const {
  if (a > b) throw DomainError("PiecewiseLinear1D::integral: need a <= b");
  return antiderivative(b) - antiderivative(a);
}

Interval PiecewiseLinear1D::clarke(double x) const {
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it != breakpoints_.end() && *it == x) {
    const auto j = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    return {std::min(slopes_[j], slopes_[j + 1]), std::max(slopes_[j], slopes_[j + 1])};
  }
  const double s = slope_at(x);
  return {s, s};
}

Interval PiecewiseLinear1D::slope_hull(double a, double b) const {
  if (a > b) throw DomainError("PiecewiseLinear1D::slope_hull: need a <= b");
  // Segment j is (b_{j-1}, b_j); a closed window touching a knot picks up both neighbours.
  const auto first = static_cast<std::size_t>(
      std::distance(breakpoints_.begin(), std::lower_bound(breakpoints_.begin(), breakpoints_.end(), a)));
  const std::size_t last = segment(b);
  Interval out{slopes_[first], slopes_[first]};
  for (std::size_t j = first; j <= last; ++j) {
    out.lo = std::min(out.lo, slopes_[j]);
    out.hi = std::max(out.hi, slopes_[j]);
  }
  return out;
}

double PiecewiseLinear1D::lipschitz() const {
  double m = 0.0;
  for (double s : slopes_) m = std::max(m, std::abs(s));
  return m;
}

PiecewiseLinear1D PiecewiseLinear1D::scaled(double c) const {
  std::vector<double> s = slopes_;
  for (auto& v : s) v *= c;
  return PiecewiseLinear1D(breakpoints_, std::move(s), anchor_, c * anchor_value_);
}

}  // namespace nashsg
