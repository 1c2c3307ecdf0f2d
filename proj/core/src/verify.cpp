#include "nashsg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nashsg/cournot.hpp"
#include "nashsg/potential.hpp"
#include "nashsg/residuals.hpp"
#include "nashsg/smoothing.hpp"
#include "nashsg/solvers.hpp"

namespace nashsg {

namespace {

class Suite {
 public:
  Suite(const VerifyOptions& o, std::ostream& out) : opts_(o), out_(out) {}

  /// Records measured <= bound.
  void at_most(const std::string& name, double measured, double bound) { add(name, measured, bound, measured <= bound, "<="); }
  /// Records measured >= bound.
  void at_least(const std::string& name, double measured, double bound) { add(name, measured, bound, measured >= bound, ">="); }

  RandomStream stream(std::uint32_t player = 0, std::uint64_t it = 0) {
    return RandomStream(opts_.seed, StreamKey{static_cast<std::uint32_t>(results_.size()), player, Purpose::test, it});
  }

  const VerifyOptions& opts() const { return opts_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  void add(const std::string& name, double measured, double bound, bool pass, const char* rel) {
    results_.push_back({name, measured, bound, pass});
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %-44s measured %.6g %s bound %.6g\n", pass ? "PASS" : "FAIL", name.c_str(),
                  measured, rel, bound);
    out_ << buf << std::flush;
  }

  VerifyOptions opts_;
  std::ostream& out_;
  std::vector<CheckResult> results_;
};

std::vector<double> random_point(RandomStream& s, const BoxSet& box) {
  std::vector<double> x(box.dim());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = sample_uniform(s, box.lower()[j], box.upper()[j]);
  return x;
}

/// Random point of X with every coordinate at least `gap` away from the kink at 4.
std::vector<double> point_off_kink(RandomStream& s, const BoxSet& box, double gap) {
  auto x = random_point(s, box);
  for (auto& v : x)
    while (std::abs(v - 4.0) <= gap || v < gap || v > 12.0 - gap) v = sample_uniform(s, 0.0, 12.0);
  return x;
}

void sets_and_randomness(Suite& s) {
  {
    auto r = s.stream();
    const auto box = BoxSet::uniform(6, 0.0, 12.0);
    double worst = 0.0, idem = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> x(6), y(6);
      for (std::size_t j = 0; j < 6; ++j) {
        x[j] = sample_uniform(r, -10.0, 22.0);
        y[j] = sample_uniform(r, -10.0, 22.0);
      }
      const auto px = project(x, box), py = project(y, box);
      std::vector<double> d(6), e(6);
      for (std::size_t j = 0; j < 6; ++j) {
        d[j] = px[j] - py[j];
        e[j] = x[j] - y[j];
      }
      worst = std::max(worst, norm(d) - norm(e));
      const auto ppx = project(px, box);
      for (std::size_t j = 0; j < 6; ++j) idem = std::max(idem, std::abs(ppx[j] - px[j]));
    }
    s.at_most("projection nonexpansive (max excess)", worst, 1e-12);
    s.at_most("projection idempotent (max change)", idem, 0.0);
  }
  {
    auto r = s.stream();
    double m = 0.0;
    constexpr int n = 1'000'000;
    for (int t = 0; t < n; ++t) m += sample_uniform(r, 0.0, 1.0);
    s.at_most("U[0,1] mean |m - 1/2|", std::abs(m / n - 0.5), 0.002);
  }
  {
    auto r = s.stream();
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) worst = std::max(worst, std::abs(norm(sample_sphere(r, 3, 2.0)) - 2.0));
    s.at_most("sphere radius error (n=3, eta=2)", worst, 1e-12);
  }
  {
    auto r = s.stream();
    const auto dist = OutputDistribution::uniform(4);
    std::vector<int> c(5, 0);
    constexpr int n = 100000;
    for (int t = 0; t < n; ++t) ++c[sample_output_index(r, dist)];
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) worst = std::max(worst, std::abs(c[k] / double(n) - 0.25));
    s.at_most("P_R uniform T=4 max frequency error", worst, 0.01);
  }
}

void games(Suite& s) {
  const auto c6 = cournot_nonsmooth();
  const auto sm = cournot_smooth();
  const auto h4 = cournot_hierarchical();
  {
    auto r = s.stream();
    double gap = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t i = static_cast<std::size_t>(t) % 6;
      auto x = random_point(r, c6.structured->strategy_sets().flat());
      const double b = sample_uniform(r, 0.0, 12.0);
      gap = std::max(gap, potential_identity_gap(*c6.structured, c6.potential, i, x, std::span<const double>(&b, 1)));
      gap = std::max(gap, potential_identity_gap(*sm.smooth, sm.potential, i, x, std::span<const double>(&b, 1)));
      auto z = random_point(r, h4.structured->strategy_sets().flat());
      const double c = sample_uniform(r, 0.0, 20.0);
      gap = std::max(gap, potential_identity_gap(*h4.structured, h4.potential, i % 4, z, std::span<const double>(&c, 1)));
    }
    s.at_most("potential identity (3 games, max gap)", gap, 1e-8);
  }
  {
    auto r = s.stream();
    constexpr double h = 1e-5;
    double g6 = 0.0, gs = 0.0, gh = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto x = point_off_kink(r, c6.structured->strategy_sets().flat(), 10 * h);
      g6 = std::max(g6, potential_gradient_check(*c6.structured, c6.potential, x, h));
      gs = std::max(gs, potential_gradient_check(*sm.smooth, sm.potential, x, h));
      auto z = random_point(r, BoxSet::uniform(4, 0.01, 19.99));
      gh = std::max(gh, potential_gradient_check(*h4.structured, h4.potential, z, h));
    }
    s.at_most("potential gradient (cournot6, fd 1e-5)", g6, 1e-5);
    s.at_most("potential gradient (smooth variant)", gs, 1e-6);
    s.at_most("potential gradient (hier4, implicit term)", gh, 1e-4);
  }
  {
    // Coupling-gradient oracle against its expectation, 4 standard errors.
    auto r = s.stream();
    const auto& g = *c6.structured;
    double worst = 0.0;
    for (int p = 0; p < 3; ++p) {
      const auto x = random_point(r, g.strategy_sets().flat());
      for (std::size_t i = 0; i < 6; ++i) {
        double m = 0.0, q = 0.0, v = 0.0;
        constexpr int n = 100000;
        for (int l = 0; l < n; ++l) {
          g.sampled_coupling_gradient(i, x, g.draw_noise(r), std::span<double>(&v, 1));
          m += v;
          q += v * v;
        }
        m /= n;
        const double se = std::sqrt(std::max(0.0, q / n - m * m) / n);
        double exact = 0.0;
        g.coupling_gradient(i, x, std::span<double>(&exact, 1));
        worst = std::max(worst, std::abs(m - exact) / se);
      }
    }
    s.at_most("coupling oracle bias (in standard errors)", worst, 4.0);
  }
  {
    auto r = s.stream();
    const auto& g = *h4.hierarchical;
    const double mu = g.strong_monotonicity(0);
    double ratio = 0.0, q = 0.0;
    constexpr int n = 20000;
    for (int l = 0; l < n; ++l) {
      const double x = sample_uniform(r, 0.0, 20.0);
      const double a = sample_uniform(r, 0.0, 200.0), b = sample_uniform(r, 0.0, 200.0);
      const double xi = g.draw_noise(r);
      double fa = 0.0, fb = 0.0;
      g.sampled_follower_operator(0, std::span<const double>(&x, 1), std::span<const double>(&a, 1), xi,
                                  std::span<double>(&fa, 1));
      g.sampled_follower_operator(0, std::span<const double>(&x, 1), std::span<const double>(&b, 1), xi,
                                  std::span<double>(&fb, 1));
      const double v = (fa - fb) * (a - b) / ((a - b) * (a - b));
      ratio += v;
      q += v * v;
    }
    ratio /= n;
    const double se = std::sqrt(std::max(0.0, q / n - ratio * ratio) / n);
    s.at_least("follower monotonicity modulus (mean)", ratio, mu - 4.0 * se);
  }
}

void smoothing(Suite& s) {
  const auto c6 = cournot_nonsmooth();
  const auto& g = *c6.structured;
  const double L0 = g.private_lipschitz(0) * s.opts().l0_scale;
  {
    auto r = s.stream();
    auto dirs = s.stream(1);
    double worst = 0.0, moment = 0.0;
    const double eta = 0.5;
    for (double x : {1.0, 3.8, 4.0, 4.3, 11.0}) {
      constexpr int n = 100000;
      double m = 0.0, q = 0.0;
      for (int l = 0; l < n; ++l) {
        const auto e = two_point_gradient(g, 0, std::span<const double>(&x, 1), eta, g.draw_noise(r), dirs);
        m += e.value[0];
        q += e.value[0] * e.value[0];
      }
      m /= n;
      q /= n;
      const double se = std::sqrt(std::max(q - m * m, 1e-300) / n);
      worst = std::max(worst, std::abs(m - smoothed_private_gradient(g, 0, x, eta)) / se);
      moment = std::max(moment, q);
    }
    s.at_most("two-point estimator bias (standard errors)", worst, 4.0);
    s.at_most("two-point second moment", moment, 16.0 * std::sqrt(2.0 * std::numbers::pi) * L0 * L0);
  }
  {
    const auto& h = *g.private_cost_pwl(0);
    const double Lh = h.lipschitz();
    double err = 0.0, lip = 0.0, incl = 0.0;
    double err_bound = 0.0, lip_bound = 0.0;
    for (double eta : {0.3, 0.5, 0.8}) {
      const auto sm = smooth_1d_closed_form(h, eta);
      constexpr int n = 200;
      double prev = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double x = 12.0 * k / n;
        err = std::max(err, std::abs(sm.value(x) - h(x)) / (Lh * eta));
        const double gr = sm.grad(x);
        if (k > 0) lip = std::max(lip, std::abs(gr - prev) / (12.0 / n) / (Lh / eta));
        prev = gr;
        incl = std::max(incl, delta_clarke(h, x, eta).distance_to(gr));
      }
    }
    err_bound = lip_bound = 1.0 + 1e-12;
    s.at_most("smoothing error / (L0 eta)", err, err_bound);
    s.at_most("smoothed gradient slope / (L0 sqrt(n) / eta)", lip, lip_bound);
    s.at_most("grad h^eta outside delta-Clarke set", incl, 1e-12);
  }
  {
    auto r = s.stream();
    const double eta = 0.5;
    double worst = -1e300;
    for (int t = 0; t < 50; ++t) {
      auto x = random_point(r, g.strategy_sets().flat());
      if (t % 5 == 0) x[t % 6] = 4.0;  // exercise the kink
      const double gamma = 0.02;
      double dev = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        const double d = deviation_bound(*g.private_cost_pwl(i), x[i], eta);
        dev += d * d;
      }
      const double lhs = clarke_residual(g, x, gamma);
      const double rhs = 2.0 * dev + 2.0 * smoothed_residual(g, x, gamma, eta).mean_sq;
      worst = std::max(worst, lhs - rhs);
    }
    s.at_most("Clarke residual chain (lhs - rhs)", worst, 1e-10);
  }
}

void solvers(Suite& s) {
  const auto c6 = cournot_nonsmooth();
  const auto h4 = cournot_hierarchical();
  {
    // Lower-level SA against the closed-form follower y(0) = 175.
    const auto& g = *h4.hierarchical;
    LowerLevelConfig lc;
    const double x = 0.0;
    constexpr int reps = 50;
    constexpr std::size_t t = 1000;
    double mse = 0.0;
    for (int k = 0; k < reps; ++k) {
      auto r = s.stream(0, static_cast<std::uint64_t>(k));
      const auto y = sa_lower_solve(g, 0, std::span<const double>(&x, 1), t, lc, r);
      mse += (y[0] - 175.0) * (y[0] - 175.0) / reps;
    }
    s.at_most("SA follower MSE at t=1000", mse, sa_inexactness(g, 0, lc, static_cast<double>(t)));
  }
  {
    const auto& g = *c6.structured;
    SolverConfig cfg;
    cfg.eta = 0.5;
    cfg.gamma = 0.02;
    cfg.batch = 3;
    cfg.max_iters = 20;
    cfg.full_trace = true;
    cfg.seed = s.opts().seed;
    cfg.x0.assign(6, 12.0);
    cfg.snapshot_every = 1;
    const auto a = rs_rsg_run(g, cfg);
    const auto b = rs_rsg_run(g, cfg);
    auto perm = cfg;
    perm.player_order = {5, 3, 1, 0, 2, 4};
    const auto c = rs_rsg_run(g, perm);
    const double expect_fo = 6.0 * 3 * 20;
    s.at_most("RS-RSG counter error (zo, fo)",
              std::abs(double(a.zo_samples) - 2 * expect_fo) + std::abs(double(a.fo_samples) - expect_fo), 0.0);
    double infeas = 0.0;
    for (const auto& [k, x] : a.iterates)
      for (double v : x) infeas = std::max({infeas, -v, v - 12.0});
    s.at_most("iterates outside X (max violation)", infeas, 0.0);
    double diff = 0.0;
    for (std::size_t j = 0; j < 6; ++j)
      diff = std::max({diff, std::abs(a.x_last[j] - b.x_last[j]), std::abs(a.x_last[j] - c.x_last[j])});
    s.at_most("rerun / permuted-order iterate difference", diff, 0.0);
  }
  {
    const auto& g = *h4.hierarchical;
    SolverConfig cfg;
    cfg.eta = 0.7;
    cfg.gamma = 0.01;
    cfg.batch = 2;
    cfg.max_iters = 10;
    cfg.full_trace = true;
    cfg.seed = s.opts().seed;
    cfg.x0.assign(4, 19.0);
    const auto a = b_rs_rsg_run(g, cfg);
    std::uint64_t expect = 0;
    for (std::size_t k = 0; k < 10; ++k) expect += 2 * 4 * 2 * lower_iterations(cfg.lower, k);
    s.at_most("b-RS-RSG lower-level counter error", std::abs(double(a.ll_samples) - double(expect)), 0.0);
  }
  {
    // Noiseless RSG on the smooth game descends the potential.
    const auto sm = cournot_smooth();
    auto quiet = std::make_shared<NoiselessSmoothGame>(sm.smooth);
    SolverConfig cfg;
    cfg.gamma = 1.0 / (2.0 * 0.35);
    cfg.max_iters = 300;
    cfg.full_trace = true;
    cfg.x0.assign(6, 12.0);
    cfg.metric = [&](std::span<const double> x) { return sm.potential(x); };
    const auto rec = rsg_run(*quiet, cfg);
    double rise = -1e300;
    for (std::size_t k = 1; k < rec.trace.size(); ++k) rise = std::max(rise, rec.trace[k].value - rec.trace[k - 1].value);
    s.at_most("noiseless potential increase (max step)", rise, 1e-12);
  }
}

}  // namespace

std::vector<CheckResult> verify_suite(const VerifyOptions& opts, std::ostream& out) {
  Suite s(opts, out);
  sets_and_randomness(s);
  games(s);
  smoothing(s);
  solvers(s);
  return s.take();
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace nashsg
