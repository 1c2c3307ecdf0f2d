#include <cmath>

#include "doctest.h"
#include "nashsg/error.hpp"
#include "nashsg/piecewise_linear.hpp"
#include "nashsg/random.hpp"

using namespace nashsg;

namespace {

double midpoint_rule(const PiecewiseLinear1D& f, double a, double b, int n = 200000) {
  double s = 0.0;
  const double h = (b - a) / n;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h;
}

}  // namespace

TEST_CASE("min of lines has the expected kink") {
  const auto g = PiecewiseLinear1D::min_of_lines(1.0, 0.0, 0.5, 2.0);
  CHECK(g.breakpoints() == std::vector<double>{4.0});
  CHECK(g(0.0) == doctest::Approx(0.0));
  CHECK(g(4.0) == doctest::Approx(4.0));
  CHECK(g(10.0) == doctest::Approx(7.0));
  CHECK(g(-2.0) == doctest::Approx(-2.0));
  CHECK(g.slope_at(1.0) == 1.0);
  CHECK(g.slope_at(5.0) == 0.5);
  CHECK(g.lipschitz() == 1.0);
  const auto h = g.scaled(-3.0);
  CHECK(h(10.0) == doctest::Approx(-21.0));
  CHECK(h.lipschitz() == 3.0);
  CHECK_THROWS_AS(PiecewiseLinear1D::min_of_lines(1, 0, 1, 2), DomainError);
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(PiecewiseLinear1D({1.0}, {1.0}), DimensionError);
  CHECK_THROWS_AS(PiecewiseLinear1D({1.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
}

TEST_CASE("anchor fixes the value") {
  const PiecewiseLinear1D f({0.0, 2.0}, {-1.0, 1.0, 0.0}, 3.0, 10.0);
  CHECK(f(3.0) == doctest::Approx(10.0));
  CHECK(f(2.0) == doctest::Approx(10.0));
  CHECK(f(0.0) == doctest::Approx(8.0));
  CHECK(f(-1.0) == doctest::Approx(9.0));
}

TEST_CASE("integral matches a fine midpoint rule") {
  const PiecewiseLinear1D f({-1.0, 0.5, 3.0}, {2.0, -1.0, 0.25, 4.0}, 1.0, -2.0);
  RandomStream s(9, 9);
  for (int t = 0; t < 30; ++t) {
    double a = sample_uniform(s, -4.0, 6.0), b = sample_uniform(s, -4.0, 6.0);
    if (a > b) std::swap(a, b);
    CHECK(f.integral(a, b) == doctest::Approx(midpoint_rule(f, a, b)).epsilon(1e-7));
  }
  CHECK(f.integral(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(f.integral(2.0, 1.0), DomainError);
}

TEST_CASE("clarke subdifferential and slope hull") {
  const PiecewiseLinear1D f({0.0, 2.0}, {-1.0, 1.0, 0.5});
  auto c = f.clarke(0.0);
  CHECK(c.lo == -1.0);
  CHECK(c.hi == 1.0);
  c = f.clarke(1.0);
  CHECK(c.lo == 1.0);
  CHECK(c.hi == 1.0);
  c = f.clarke(2.0);
  CHECK(c.lo == 0.5);
  CHECK(c.hi == 1.0);
  auto hull = f.slope_hull(-1.0, 3.0);
  CHECK(hull.lo == -1.0);
  CHECK(hull.hi == 1.0);
  hull = f.slope_hull(2.5, 3.0);
  CHECK(hull.lo == 0.5);
  CHECK(hull.hi == 0.5);
}

TEST_CASE("interval distance") {
  const Interval I{-1.0, 2.0};
  CHECK(I.distance_to(0.0) == 0.0);
  CHECK(I.distance_to(3.0) == 1.0);
  CHECK(I.distance_to(-4.0) == 3.0);
  CHECK(I.contains(2.0 + 1e-13, 1e-12));
}
