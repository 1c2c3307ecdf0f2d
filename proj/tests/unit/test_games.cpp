#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/potential.hpp"

using namespace nashsg;

namespace {

// Hand-written expected objective of the nonsmooth game, xi ~ U[0, 1].
double cournot6_objective(std::size_t i, const std::vector<double>& x) {
  const double c = 0.5 * (5.0 + (i + 1) / 48.0);
  double s = 0.0;
  for (double v : x) s += v;
  return c * std::min(x[i], 0.5 * x[i] + 2.0) + (-2.0 + 0.01 * s) * x[i];
}

std::vector<double> rand_point(RandomStream& r, std::size_t n, double lo, double hi) {
  std::vector<double> x(n);
  for (auto& v : x) v = sample_uniform(r, lo, hi);
  return x;
}

}  // namespace

TEST_CASE("registry") {
  CHECK(known_games() == std::vector<std::string>{"cournot6", "cournot6-smooth", "hier4"});
  try {
    make_game("cournot7");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cournot6") != std::string::npos);
    CHECK(msg.find("hier4") != std::string::npos);
  }
  const auto h = make_game("hier4");
  CHECK(h.hierarchical);
  CHECK(h.structured);
  CHECK(h.default_x0 == std::vector<double>(4, 19.0));
  CHECK(make_game("cournot6").default_x0 == std::vector<double>(6, 12.0));
}

TEST_CASE("cournot6 expectations match a hand-written formula") {
  const auto g = cournot_nonsmooth();
  const auto& m = *g.structured;
  RandomStream r(1, 1);
  for (int t = 0; t < 50; ++t) {
    const auto x = rand_point(r, 6, 0.0, 12.0);
    for (std::size_t i = 0; i < 6; ++i) CHECK(m.objective(i, x) == doctest::Approx(cournot6_objective(i, x)).epsilon(1e-12));
  }
  CHECK(m.private_lipschitz(0) == doctest::Approx(5.0 + 1.0 / 48.0));
  CHECK(m.private_lipschitz(5) == doctest::Approx(5.125));
}

TEST_CASE("cournot6 sampled private cost averages to h") {
  const auto g = cournot_nonsmooth();
  const auto& m = *g.structured;
  RandomStream r(2, 2);
  const double x = 7.0;
  double s = 0.0, q = 0.0;
  constexpr int n = 100000;
  for (int t = 0; t < n; ++t) {
    const double v = m.sampled_private_cost(3, std::span<const double>(&x, 1), m.draw_noise(r));
    s += v;
    q += v * v;
  }
  s /= n;
  const double se = std::sqrt((q / n - s * s) / n);
  CHECK(std::abs(s - m.private_cost(3, std::span<const double>(&x, 1))) < 4 * se);
}

TEST_CASE("smooth variant has the interior equilibrium of its linear system") {
  const auto g = cournot_smooth();
  // grad f_i = c_i - 4 + 0.05 (s + x_i) = 0  =>  x_i = r_i - sum(r) / 7, r_i = (4 - c_i) / 0.05.
  std::vector<double> rr(6), x(6);
  double sr = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    rr[i] = (4.0 - 0.5 * (5.0 + (i + 1) / 48.0)) / 0.05;
    sr += rr[i];
  }
  for (std::size_t i = 0; i < 6; ++i) x[i] = rr[i] - sr / 7.0;
  const auto F = exact_pseudo_gradient(*g.smooth, x);
  for (double v : F) CHECK(std::abs(v) < 1e-12);
  for (double v : x) {
    CHECK(v > 0.0);
    CHECK(v < 12.0);
  }
}

TEST_CASE("hier4 follower closed form") {
  const auto g = cournot_hierarchical();
  const auto& h = *g.hierarchical;
  CHECK(h.strong_monotonicity(0) == doctest::Approx(0.04));
  for (double x : {0.0, 5.0, 20.0}) {
    double y = 0.0, F = 1.0;
    h.exact_follower(0, std::span<const double>(&x, 1), std::span<double>(&y, 1));
    CHECK(y == doctest::Approx(175.0 - 0.5 * x));
    h.follower_operator_mean(0, std::span<const double>(&x, 1), std::span<const double>(&y, 1),
                             std::span<double>(&F, 1));
    CHECK(std::abs(F) < 1e-12);
  }
  const double x = 3.0;
  CHECK(h.reduced_private_cost(0, std::span<const double>(&x, 1)) ==
        doctest::Approx(5.0 * std::log(4.0) + 0.02 * 3.0 * 173.5));
  double bad = -1.0;
  CHECK_THROWS_AS(h.sampled_private_cost(0, std::span<const double>(&bad, 1), std::span<const double>(&x, 1), 0.0),
                  DomainError);
}

TEST_CASE("hier4 reduced gradient matches central differences") {
  const auto g = cournot_hierarchical();
  const auto& h = *g.hierarchical;
  for (double x = 0.5; x < 20.0; x += 1.7) {
    double d = 0.0;
    h.reduced_private_cost_gradient(0, std::span<const double>(&x, 1), std::span<double>(&d, 1));
    const double p = x + 1e-6, m = x - 1e-6;
    const double fd = (h.reduced_private_cost(0, std::span<const double>(&p, 1)) -
                       h.reduced_private_cost(0, std::span<const double>(&m, 1))) / 2e-6;
    CHECK(d == doctest::Approx(fd).epsilon(1e-6));
    CHECK(std::abs(d) <= h.private_lipschitz(0) + 1e-12);
  }
}

TEST_CASE("potential identity and gradient on every benchmark") {
  RandomStream r(4, 4);
  const auto c6 = cournot_nonsmooth();
  const auto sm = cournot_smooth();
  const auto h4 = cournot_hierarchical();
  for (int t = 0; t < 100; ++t) {
    const auto x = rand_point(r, 6, 0.0, 12.0);
    const double b = sample_uniform(r, 0.0, 12.0);
    const std::size_t i = t % 6;
    CHECK(potential_identity_gap(*c6.structured, c6.potential, i, x, std::span<const double>(&b, 1)) < 1e-8);
    CHECK(potential_identity_gap(*sm.smooth, sm.potential, i, x, std::span<const double>(&b, 1)) < 1e-8);
    const auto z = rand_point(r, 4, 0.0, 20.0);
    CHECK(potential_identity_gap(*h4.structured, h4.potential, i % 4, z, std::span<const double>(&b, 1)) < 1e-8);
    const auto zi = rand_point(r, 4, 0.01, 19.99);
    CHECK(potential_gradient_check(*h4.structured, h4.potential, zi, 1e-5) < 1e-5);
    CHECK(potential_gradient_check(*sm.smooth, sm.potential, x, 1e-5) < 1e-5);
  }
}

TEST_CASE("potential bounds bracket random samples") {
  const auto c6 = cournot_nonsmooth();
  const auto box = c6.structured->strategy_sets().flat();
  const auto b = estimate_potential_bounds(c6.potential, box, 6);
  RandomStream r(5, 5);
  for (int t = 0; t < 2000; ++t) {
    const auto x = rand_point(r, 6, 0.0, 12.0);
    const double p = c6.potential(x);
    CHECK(p <= b.max + 1e-9);
    CHECK(p >= b.min - 1e-9);
  }
  CHECK_THROWS_AS(estimate_potential_bounds(c6.potential, box, 100, 1000), BudgetError);
}

TEST_CASE("smoothed potential differs from P by the smoothing of h") {
  const auto c6 = cournot_nonsmooth();
  const auto Pe = smoothed_potential(c6.structured, c6.potential, 0.5);
  // Off the kink windows h is affine, so its interval average equals h.
  const std::vector<double> x{1.0, 2.0, 6.0, 7.0, 10.0, 11.0};
  CHECK(Pe(x) == doctest::Approx(c6.potential(x)).epsilon(1e-12));
  std::vector<double> y = x;
  y[0] = 4.0;
  CHECK(Pe(y) < c6.potential(y));  // h is concave at its kink
}
