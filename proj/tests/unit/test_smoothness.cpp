#include <cmath>

#include "doctest.h"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/potential.hpp"
#include "nashsg/smoothness.hpp"

using namespace nashsg;

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(std::vector<double>{3, 0, 0, 1}, 2) == doctest::Approx(3.0));
  // [[1, 1], [0, 1]] has top singular value the golden ratio.
  CHECK(spectral_norm(std::vector<double>{1, 1, 0, 1}, 2) == doctest::Approx((1 + std::sqrt(5.0)) / 2));
  CHECK_THROWS_AS(spectral_norm(std::vector<double>{1, 2, 3}, 2), DimensionError);
}

TEST_CASE("finite-difference Jacobian norm of a linear map") {
  const auto F = [](std::span<const double> x) { return std::vector<double>{2 * x[0] + x[1], x[1] - x[2], 0.5 * x[2]}; };
  const std::vector<double> J{2, 1, 0, 0, 1, -1, 0, 0, 0.5};
  CHECK(jacobian_norm_fd(F, std::vector<double>{1, 2, 3}, 1e-4) == doctest::Approx(spectral_norm(J, 3)).epsilon(1e-8));
}

TEST_CASE("analytic smoothness of cournot6") {
  const auto c6 = cournot_nonsmooth();
  const double L = analytic_smoothness(*c6.structured, 0.5);
  CHECK(L == doctest::Approx(0.07 + 5.125 * std::sqrt(6.0) / 0.5));
  CHECK(spectral_norm(c6.structured->coupling_jacobian(), 6) == doctest::Approx(0.07));
  CHECK_THROWS_AS(analytic_smoothness(*c6.structured, 0.0), DomainError);
}

TEST_CASE("numeric smoothness stays below the analytic bound") {
  const auto c6 = cournot_nonsmooth();
  const auto& g = *c6.structured;
  const auto Pe = smoothed_potential(c6.structured, c6.potential, 0.5);
  const auto bounds = estimate_potential_bounds(Pe, g.strategy_sets().flat(), 5);
  std::vector<std::vector<double>> probes;
  for (double v : {0.0, 3.8, 4.0, 4.4, 8.0, 12.0}) probes.push_back(std::vector<double>(6, v));
  probes.push_back({0.0, 4.0, 3.6, 12.0, 4.2, 7.0});
  const auto num = estimate_smoothness(g, 0.5, SmoothnessMethod::finite_difference, probes, 1e-3, bounds);
  const auto ana = estimate_smoothness(g, 0.5, SmoothnessMethod::analytic, {}, 0.0, bounds);
  CHECK(num.L > 0.0);
  CHECK(num.L <= ana.L);
  CHECK(ana.D == doctest::Approx(std::sqrt((bounds.max - bounds.min) / ana.L)));
  CHECK(ana.L1_m == doctest::Approx(0.07));
  probes.push_back(std::vector<double>(6, 13.0));
  CHECK_THROWS_AS(estimate_smoothness(g, 0.5, SmoothnessMethod::finite_difference, probes, 1e-3, bounds), DomainError);
}

TEST_CASE("potential radius") {
  CHECK(potential_radius({10.0, 1.0, true}, 9.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(potential_radius({0.0, 1.0, true}, 1.0), DomainError);
}
