#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/residuals.hpp"
#include "nashsg/solvers.hpp"

using namespace nashsg;

TEST_CASE("budget formulas") {
  // sigma sqrt(6M) / (4 L D) = 2 * sqrt(600) / 4 = 12.25 -> 13
  CHECK(batch_size_from_budget(100.0, 2.0, 1.0, 1.0) == 13);
  CHECK(batch_size_from_budget(100.0, 0.0, 1.0, 1.0) == 1);
  CHECK_THROWS_AS(batch_size_from_budget(0.0, 1.0, 1.0, 1.0), DomainError);
  CHECK(iterations_from_budget(1'000'000, 6, 10) == 16666);
  CHECK_THROWS_AS(iterations_from_budget(10, 0, 1), DomainError);
  CHECK(rs_sigma(2.0, 1, 3.0) == doctest::Approx(std::sqrt(32 * std::sqrt(2 * std::numbers::pi) * 4 + 6)));
  CHECK(hierarchical_sigma(2.0, 0.5, 1, 0.1, 0.5, 3.0) ==
        doctest::Approx(std::sqrt(4 * 0.25 * 0.1 / 0.25 + 64 * std::sqrt(2 * std::numbers::pi) * 4 + 6)));
}

TEST_CASE("lower-level schedule and inexactness bound") {
  LowerLevelConfig c;
  CHECK(lower_iterations(c, 0) == 1);
  CHECK(lower_iterations(c, 1) == 3);   // ceil(2^1.1)
  CHECK(lower_iterations(c, 9) == 13);  // ceil(10^1.1) = ceil(12.59)
  c.t_fixed = 7;
  CHECK(lower_iterations(c, 100) == 7);
  // max{(4 + 1) 1 / (2 * 1 - 1), 1 * 9} / (t + 1)
  CHECK(sa_inexactness(2.0, 1.0, 1.0, 1.0, 1.0, 9.0, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(sa_inexactness(2.0, 1.0, 0.4, 1.0, 1.0, 9.0, 2.0), DomainError);
}

TEST_CASE("SA follower stays feasible and its error shrinks with t") {
  const auto h4 = cournot_hierarchical();
  const auto& g = *h4.hierarchical;
  LowerLevelConfig lc;
  const double x = 0.0;
  double prev = 1e300;
  for (std::size_t t : {10u, 100u, 1000u}) {
    double mse = 0.0;
    for (int r = 0; r < 100; ++r) {
      RandomStream s(11, StreamKey{static_cast<std::uint32_t>(r), 0, Purpose::test, t});
      const auto y = sa_lower_solve(g, 0, std::span<const double>(&x, 1), t, lc, s);
      CHECK(y[0] >= 0.0);
      CHECK(y[0] <= 200.0);
      mse += (y[0] - 175.0) * (y[0] - 175.0) / 100;
    }
    CHECK(mse <= sa_inexactness(g, 0, lc, static_cast<double>(t)));
    CHECK(mse < prev);
    prev = mse;
  }
  RandomStream s(1, 1);
  CHECK_THROWS_AS(sa_lower_solve(g, 0, std::span<const double>(&x, 1), 0, lc, s), DomainError);
}

TEST_CASE("noiseless RSG reaches the smooth equilibrium") {
  const auto sm = cournot_smooth();
  NoiselessSmoothGame quiet(sm.smooth);
  SolverConfig cfg;
  cfg.gamma = 1.0 / (2 * 0.35);
  cfg.max_iters = 1000;
  cfg.full_trace = true;
  cfg.x0.assign(6, 12.0);
  const auto rec = rsg_run(quiet, cfg);
  CHECK(vi_residual(*sm.smooth, rec.x_last, cfg.gamma).mean_sq < 1e-12);
  CHECK(rec.iterations == 1000);
  CHECK(rec.fo_samples == 6000);
  CHECK(rec.zo_samples == 0);
}

TEST_CASE("RS-RSG accounting follows the budget") {
  const auto c6 = cournot_nonsmooth();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.gamma = 0.02;
  cfg.batch = 4;
  cfg.budget = 1000;
  cfg.full_trace = true;
  cfg.x0.assign(6, 12.0);
  const auto rec = rs_rsg_run(*c6.structured, cfg);
  CHECK(rec.T == 1000 / 24);
  CHECK(rec.iterations == rec.T);
  CHECK(rec.fo_samples == 24 * rec.T);
  CHECK(rec.zo_samples == 48 * rec.T);
  CHECK(rec.ll_samples == 0);
  CHECK(rec.R >= 1);
  CHECK(rec.R <= rec.T);
  CHECK(rec.x_R.size() == 6);
  // Without full_trace the run stops at R.
  cfg.full_trace = false;
  const auto short_rec = rs_rsg_run(*c6.structured, cfg);
  CHECK(short_rec.iterations == short_rec.R);
  CHECK(short_rec.x_R == rec.x_R);
}

TEST_CASE("RS-RSG input validation") {
  const auto c6 = cournot_nonsmooth();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.gamma = 0.02;
  cfg.max_iters = 5;
  cfg.x0.assign(6, 13.0);
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DomainError);
  cfg.x0.assign(5, 1.0);
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DimensionError);
  cfg.x0.clear();
  cfg.eta = 0.0;
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DomainError);
  cfg.eta = 0.5;
  cfg.player_order = {0, 1, 2, 3, 4, 4};
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DomainError);
  cfg.player_order.clear();
  cfg.max_iters = 0;
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DomainError);
  cfg.budget = 5;
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), BudgetError);
}

TEST_CASE("runs are deterministic, order independent and seed dependent") {
  const auto c6 = cournot_nonsmooth();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.gamma = 0.02;
  cfg.batch = 2;
  cfg.max_iters = 50;
  cfg.full_trace = true;
  cfg.seed = 9;
  cfg.x0.assign(6, 12.0);
  const auto a = rs_rsg_run(*c6.structured, cfg);
  auto p = cfg;
  p.player_order = {3, 1, 4, 0, 5, 2};
  CHECK(rs_rsg_run(*c6.structured, p).x_last == a.x_last);
  p = cfg;
  p.seed = 10;
  CHECK(rs_rsg_run(*c6.structured, p).x_last != a.x_last);
  p = cfg;
  p.path = 1;
  CHECK(rs_rsg_run(*c6.structured, p).x_last != a.x_last);
}

TEST_CASE("step-weighted output rule") {
  const auto c6 = cournot_nonsmooth();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.gammas = {0.01, 0.02, 0.03};
  cfg.output_rule = OutputRule::step_weighted;
  cfg.L = 25.0;
  cfg.x0.assign(6, 12.0);
  const auto rec = rs_rsg_run(*c6.structured, cfg);
  CHECK(rec.T == 3);
  cfg.L = 50.0;  // 1/L = 0.02 < 0.03
  CHECK_THROWS_AS(rs_rsg_run(*c6.structured, cfg), DomainError);
}

TEST_CASE("b-RS-RSG lower-level accounting, exact mode and truncation") {
  const auto h4 = cournot_hierarchical();
  SolverConfig cfg;
  cfg.eta = 0.7;
  cfg.gamma = 0.01;
  cfg.batch = 3;
  cfg.max_iters = 12;
  cfg.full_trace = true;
  cfg.x0.assign(4, 19.0);
  const auto rec = b_rs_rsg_run(*h4.hierarchical, cfg);
  std::uint64_t ll = 0;
  for (std::size_t k = 0; k < 12; ++k) ll += 2 * 4 * 3 * lower_iterations(cfg.lower, k);
  CHECK(rec.ll_samples == ll);
  CHECK(rec.zo_samples == 2 * 4 * 3 * 12);
  CHECK(rec.fo_samples == 4 * 3 * 12);

  auto ex = cfg;
  ex.lower.mode = FollowerMode::exact;
  const auto e = b_rs_rsg_run(*h4.hierarchical, ex);
  CHECK(e.ll_samples == 0);
  // With the exact follower the scheme is RS-RSG on the reduced game.
  const auto r = rs_rsg_run(*h4.structured, cfg);
  for (std::size_t j = 0; j < 4; ++j) CHECK(e.x_last[j] == doctest::Approx(r.x_last[j]).epsilon(1e-12));

  auto tr = cfg;
  tr.ll_budget = 500;
  tr.full_trace = false;
  tr.max_iters = 1000;
  const auto t = b_rs_rsg_run(*h4.hierarchical, tr);
  CHECK(t.ll_samples <= 500);
  if (t.truncated) {
    CHECK(t.R <= t.iterations);
    CHECK(t.x_R.size() == 4);
  }
}
