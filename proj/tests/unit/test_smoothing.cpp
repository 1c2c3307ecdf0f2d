#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/smoothing.hpp"

using namespace nashsg;

namespace {

double average(const std::function<double(double)>& f, double a, double b, int n = 100000) {
  double s = 0.0;
  const double h = (b - a) / n;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h / (b - a);
}

}  // namespace

TEST_CASE("gauss-legendre integration") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return x * x * x; }, -1.0, 2.0, 1) == doctest::Approx(3.75).epsilon(1e-14));
}

TEST_CASE("closed-form interval smoothing against a direct average") {
  const auto f = PiecewiseLinear1D::min_of_lines(1.0, 0.0, 0.5, 2.0, 2.5);
  for (double eta : {0.3, 0.5, 0.8}) {
    const auto sm = smooth_1d_closed_form(f, eta);
    for (double x : {0.0, 3.5, 3.9, 4.0, 4.2, 4.7, 12.0}) {
      CHECK(sm.value(x) == doctest::Approx(average([&](double t) { return f(t); }, x - eta, x + eta)).epsilon(1e-9));
      const double fd = (sm.value(x + 1e-6) - sm.value(x - 1e-6)) / 2e-6;
      CHECK(sm.grad(x) == doctest::Approx(fd).epsilon(1e-6));
      CHECK(sm.grad(x) == doctest::Approx((f(x + eta) - f(x - eta)) / (2 * eta)));
    }
  }
  CHECK_THROWS_AS(Smoothed1D(f, 0.0), DomainError);
}

TEST_CASE("scalar two-point estimator is exact given xi") {
  const auto g = cournot_nonsmooth();
  const auto& m = *g.structured;
  RandomStream dirs(1, 1);
  const double x = 4.1, eta = 0.5, xi = 0.37;
  const double xp = x + eta, xm = x - eta;
  const double expect = (m.sampled_private_cost(2, std::span<const double>(&xp, 1), xi) -
                         m.sampled_private_cost(2, std::span<const double>(&xm, 1), xi)) /
                        (2 * eta);
  for (int t = 0; t < 20; ++t) {
    const auto e = two_point_gradient(m, 2, std::span<const double>(&x, 1), eta, xi, dirs);
    CHECK(e.value[0] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(e.direction[0]) == doctest::Approx(eta));
  }
}

TEST_CASE("two-point estimator is unbiased for a linear function in R^3") {
  const std::vector<double> c{1.0, -2.0, 0.5};
  const BlockFunction f = [&](std::span<const double> z) { return c[0] * z[0] + c[1] * z[1] + c[2] * z[2]; };
  RandomStream dirs(2, 2);
  const std::vector<double> x{0.3, 0.1, -0.2};
  std::vector<double> mean(3, 0.0);
  constexpr int n = 200000;
  for (int t = 0; t < n; ++t) {
    const auto e = two_point_gradient(f, x, 0.4, dirs);
    for (std::size_t j = 0; j < 3; ++j) mean[j] += e.value[j] / n;
  }
  // Per-component sd is at most 3 * |c| / sqrt(3) ~ 3.9, so 4 SE ~ 0.035.
  for (std::size_t j = 0; j < 3; ++j) CHECK(mean[j] == doctest::Approx(c[j]).epsilon(0.04 / std::abs(c[j])));
}

TEST_CASE("smoothed private gradient and cost") {
  const auto c6 = cournot_nonsmooth();
  const auto& m = *c6.structured;
  const auto* h = m.private_cost_pwl(1);
  REQUIRE(h != nullptr);
  const auto sm = smooth_1d_closed_form(*h, 0.5);
  for (double x : {0.0, 3.7, 4.0, 9.0}) {
    CHECK(smoothed_private_gradient(m, 1, x, 0.5) == doctest::Approx(sm.grad(x)));
    CHECK(smoothed_private_cost(m, 1, x, 0.5) == doctest::Approx(sm.value(x)));
  }
  // hier4 has no piecewise-linear h: quadrature against a direct average.
  const auto h4 = cournot_hierarchical();
  const auto& r = *h4.structured;
  const auto hx = [&](double t) { return r.private_cost(0, std::span<const double>(&t, 1)); };
  for (double x : {0.0, 10.0, 20.0})
    CHECK(smoothed_private_cost(r, 0, x, 0.7) == doctest::Approx(average(hx, x - 0.7, x + 0.7)).epsilon(1e-9));
}
