#include "nashsg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "nashsg/error.hpp"

namespace nashsg {

std::size_t batch_size_from_budget(double M, double sigma, double L, double D) {
  if (!(M > 0.0) || !(L > 0.0) || !(D > 0.0) || !(sigma >= 0.0))
    throw DomainError("batch_size_from_budget: M, L, D must be positive and sigma nonnegative");
  const double s = std::ceil(sigma * std::sqrt(6.0 * M) / (4.0 * L * D));
  if (s > 1e15) throw DomainError("batch_size_from_budget: batch size overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(s));
}

std::size_t iterations_from_budget(std::uint64_t M, std::size_t players, std::size_t S) {
  if (players == 0 || S == 0) throw DomainError("iterations_from_budget: need N, S >= 1");
  return static_cast<std::size_t>(M / (static_cast<std::uint64_t>(players) * S));
}

double rs_sigma(double L_max, std::size_t n_max, double sigma_m2) {
  const double c = std::sqrt(2.0 * std::numbers::pi);
  return std::sqrt(32.0 * c * L_max * L_max * static_cast<double>(n_max) + 2.0 * sigma_m2);
}

double hierarchical_sigma(double L_max, double Ly_max, std::size_t n_max, double eps_up, double eta,
                          double sigma_m2) {
  if (!(eta > 0.0)) throw DomainError("hierarchical_sigma: eta must be positive");
  const double n = static_cast<double>(n_max);
  const double c = std::sqrt(2.0 * std::numbers::pi);
  return std::sqrt(4.0 * n * n * Ly_max * Ly_max * eps_up / (eta * eta) + 64.0 * c * L_max * L_max * n +
                   2.0 * sigma_m2);
}

double sa_inexactness(double c_F, double v2, double alpha0, double mu, double Gamma, double sup_dist_sq,
                      double t) {
  if (!(2.0 * mu * alpha0 > 1.0)) throw DomainError("sa_inexactness: need alpha0 > 1/(2 mu)");
  if (!(Gamma > 0.0)) throw DomainError("sa_inexactness: Gamma must be positive");
  const double a = (c_F * c_F + v2) * alpha0 * alpha0 / (2.0 * mu * alpha0 - 1.0);
  return std::max(a, Gamma * sup_dist_sq) / (t + Gamma);
}

namespace {

double resolve_alpha0(const HierarchicalGameModel& game, std::size_t i, const LowerLevelConfig& cfg) {
  const double mu = game.strong_monotonicity(i);
  const double a0 = cfg.alpha0 > 0.0 ? cfg.alpha0 : 1.0 / mu;
  if (!(2.0 * mu * a0 > 1.0)) throw DomainError("sa_lower_solve: need alpha0 > 1/(2 mu_i)");
  if (!(cfg.Gamma > 0.0)) throw DomainError("sa_lower_solve: Gamma must be positive");
  return a0;
}

}  // namespace

double sa_inexactness(const HierarchicalGameModel& game, std::size_t i, const LowerLevelConfig& cfg, double t) {
  const double a0 = resolve_alpha0(game, i, cfg);
  const auto& Y = game.follower_sets().block(i);
  return sa_inexactness(game.follower_operator_bound(i), game.follower_noise_bound(i), a0,
                        game.strong_monotonicity(i), cfg.Gamma, Y.max_sq_distance_from(Y.midpoint()), t);
}

std::size_t lower_iterations(const LowerLevelConfig& cfg, std::size_t k) {
  if (cfg.t_fixed > 0) return cfg.t_fixed;
  if (!(cfg.delta > 0.0)) throw DomainError("lower_iterations: delta must be positive");
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(k + 1), 1.0 + cfg.delta)));
}

void sa_lower_solve(const HierarchicalGameModel& game, std::size_t i, std::span<const double> x_hat,
                    std::size_t t, const LowerLevelConfig& cfg, RandomStream& stream, std::span<double> y) {
  if (t == 0) throw DomainError("sa_lower_solve: need t >= 1");
  const auto& Y = game.follower_sets().block(i);
  if (y.size() != Y.dim()) throw DimensionError("sa_lower_solve: follower block length mismatch");
  const double a0 = resolve_alpha0(game, i, cfg);
  const auto& lo = Y.lower();
  const auto& hi = Y.upper();
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = 0.5 * (lo[j] + hi[j]);
  double Fbuf[8];
  std::vector<double> Fheap;
  std::span<double> F;
  if (y.size() <= 8) {
    F = std::span<double>(Fbuf, y.size());
  } else {
    Fheap.resize(y.size());
    F = Fheap;
  }
  for (std::size_t s = 0; s < t; ++s) {
    const double alpha = a0 / (static_cast<double>(s) + cfg.Gamma);
    game.sampled_follower_operator(i, x_hat, y, game.draw_noise(stream), F);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = std::clamp(y[j] - alpha * F[j], lo[j], hi[j]);
  }
}

std::vector<double> sa_lower_solve(const HierarchicalGameModel& game, std::size_t i,
                                   std::span<const double> x_hat, std::size_t t, const LowerLevelConfig& cfg,
                                   RandomStream& stream) {
  std::vector<double> y(game.follower_dim(i));
  sa_lower_solve(game, i, x_hat, t, cfg, stream, y);
  return y;
}

namespace {

struct IterationCost {
  std::uint64_t zo = 0;
  std::uint64_t fo = 0;
  std::uint64_t ll = 0;
};

StreamKey key(const SolverConfig& cfg, std::size_t player, Purpose purpose, std::size_t k) {
  return StreamKey{cfg.path, static_cast<std::uint32_t>(player), purpose, static_cast<std::uint64_t>(k)};
}

std::vector<std::size_t> resolve_order(const SolverConfig& cfg, std::size_t N) {
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  if (cfg.player_order.empty()) return order;
  auto sorted = cfg.player_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != order) throw DomainError("solver: player_order must be a permutation of 0..N-1");
  return cfg.player_order;
}

std::vector<double> resolve_x0(const SolverConfig& cfg, const GameBase& game) {
  const auto& box = game.strategy_sets().flat();
  if (cfg.x0.empty()) return box.midpoint();
  if (cfg.x0.size() != box.dim()) throw DimensionError("solver: x0 length mismatch");
  if (!box.contains(cfg.x0)) throw DomainError("solver: x0 must lie in X");
  return cfg.x0;
}

double step(const SolverConfig& cfg, std::size_t k) { return cfg.gammas.empty() ? cfg.gamma : cfg.gammas[k]; }

/// Shared loop: synchronous projected steps x^{k+1}_i = Pi_{X_i}[x^k_i - gamma_k d_i(x^k)].
/// `direction(i, k, x, d)` writes d_i from reads of x^k only.
template <class Cost, class Direction>
RunRecord run_loop(const GameBase& game, const SolverConfig& cfg, std::size_t per_iter_fo, Cost cost,
                   Direction direction) {
  const auto& part = game.partition();
  const std::size_t N = part.players();
  if (cfg.batch == 0) throw DomainError("solver: batch size must be positive");
  if (cfg.gammas.empty() && !(cfg.gamma > 0.0)) throw DomainError("solver: gamma must be positive");
  for (double g : cfg.gammas)
    if (!(g > 0.0)) throw DomainError("solver: every gamma_k must be positive");
  if (cfg.metric && cfg.metric_stride == 0) throw DomainError("solver: metric_stride must be positive");

  std::size_t T = cfg.gammas.empty() ? std::numeric_limits<std::size_t>::max() : cfg.gammas.size();
  if (cfg.max_iters > 0) T = std::min(T, cfg.max_iters);
  if (cfg.budget > 0) T = std::min(T, static_cast<std::size_t>(cfg.budget / per_iter_fo));
  if (T == std::numeric_limits<std::size_t>::max())
    throw DomainError("solver: set gammas, max_iters or budget to bound T");
  if (T == 0) throw BudgetError("solver: budget does not cover a single iteration");

  const auto order = resolve_order(cfg, N);
  RunRecord rec;
  rec.T = T;
  {
    RandomStream rs(cfg.seed, key(cfg, 0, Purpose::output_index, 0));
    if (cfg.output_rule == OutputRule::uniform) {
      rec.R = sample_output_index(rs, OutputDistribution::uniform(T));
    } else {
      std::vector<double> g(T);
      for (std::size_t k = 0; k < T; ++k) g[k] = step(cfg, k);
      rec.R = sample_output_index(rs, OutputDistribution::from_steps(g, cfg.L));
    }
  }
  const std::size_t K = cfg.full_trace ? T : rec.R;

  std::vector<double> x = resolve_x0(cfg, game);
  std::vector<double> next(x.size());
  std::vector<double> d(part.max_dim());
  const auto record = [&](std::size_t k) {
    if (cfg.metric) rec.trace.push_back({k, rec.zo_samples, rec.fo_samples, rec.ll_samples, cfg.metric(x)});
  };
  const auto snapshot = [&](std::size_t k) {
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) rec.iterates.emplace_back(k, x);
  };
  // Only the lower-level budget can stop a run early (T already respects M), so the
  // iterate history needed to redraw R is kept only when that budget is set.
  std::vector<std::vector<double>> history;
  const bool keep_history = cfg.ll_budget > 0;
  if (keep_history) history.push_back(x);
  record(0);
  snapshot(0);

  for (std::size_t k = 0; k < K; ++k) {
    const IterationCost c = cost(k);
    if ((cfg.budget > 0 && (rec.fo_samples + c.fo > cfg.budget || rec.zo_samples + c.zo > 2 * cfg.budget)) ||
        (cfg.ll_budget > 0 && rec.ll_samples + c.ll > cfg.ll_budget)) {
      rec.truncated = true;
      break;
    }
    const double g = step(cfg, k);
    for (std::size_t i : order) {
      auto di = std::span<double>(d).first(part.dim(i));
      direction(i, k, std::span<const double>(x), di);
      const auto& Xi = game.strategy_sets().block(i);
      const std::size_t off = part.offset(i);
      for (std::size_t j = 0; j < di.size(); ++j)
        next[off + j] = std::clamp(x[off + j] - g * di[j], Xi.lower()[j], Xi.upper()[j]);
    }
    x.swap(next);
    rec.zo_samples += c.zo;
    rec.fo_samples += c.fo;
    rec.ll_samples += c.ll;
    rec.iterations = k + 1;
    if (k + 1 == rec.R) rec.x_R = x;
    if (keep_history) history.push_back(x);
    if ((k + 1) % std::max<std::size_t>(1, cfg.metric_stride) == 0 || k + 1 == K) record(k + 1);
    snapshot(k + 1);
  }

  if (rec.truncated) {
    if (rec.iterations == 0) throw BudgetError("solver: budget exhausted before the first iteration");
    if (rec.R > rec.iterations) {
      RandomStream rs(cfg.seed, key(cfg, 0, Purpose::output_index, 1));
      rec.R = sample_output_index(rs, OutputDistribution::uniform(rec.iterations));
      rec.x_R = history[rec.R];
    }
  }
  rec.x_last = x;
  return rec;
}

}  // namespace

RunRecord rsg_run(const SmoothGameModel& game, const SolverConfig& cfg) {
  const auto& part = game.partition();
  const std::size_t N = part.players();
  const std::size_t S = cfg.batch;
  const auto cost = [&](std::size_t) { return IterationCost{0, static_cast<std::uint64_t>(N * S), 0}; };
  std::vector<double> g(part.max_dim());
  const auto direction = [&](std::size_t i, std::size_t k, std::span<const double> x, std::span<double> d) {
    RandomStream noise(cfg.seed, key(cfg, i, Purpose::problem_noise, k));
    auto gi = std::span<double>(g).first(d.size());
    std::fill(d.begin(), d.end(), 0.0);
    for (std::size_t l = 0; l < S; ++l) {
      game.sampled_gradient(i, x, game.draw_noise(noise), gi);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] += gi[j];
    }
    for (auto& v : d) v /= static_cast<double>(S);
  };
  return run_loop(game, cfg, N * S, cost, direction);
}

namespace {

/// Two-point smoothing step shared by RS-RSG and biased RS-RSG. `h(i, z, xi, sign, k)` evaluates
/// the sampled private cost at the perturbed block z (sign +1 for x + v, -1 for x - v).
template <class PrivateCost>
RunRecord smoothed_run(const GameBase& game, const SolverConfig& cfg, PrivateCost h,
                       const std::function<void(std::size_t, std::span<const double>, NoiseSample,
                                                std::span<double>)>& m_grad,
                       const std::function<std::uint64_t(std::size_t)>& ll_per_iter) {
  if (!(cfg.eta > 0.0)) throw DomainError("solver: eta must be positive");
  const auto& part = game.partition();
  const std::size_t N = part.players();
  const std::size_t S = cfg.batch;
  const double eta = cfg.eta;
  const auto cost = [&](std::size_t k) {
    const auto draws = static_cast<std::uint64_t>(N * S);
    return IterationCost{2 * draws, draws, ll_per_iter(k)};
  };
  const std::size_t nmax = part.max_dim();
  std::vector<double> v(nmax), zp(nmax), zm(nmax), gm(nmax), acc_h(nmax), acc_m(nmax);
  const auto direction = [&](std::size_t i, std::size_t k, std::span<const double> x, std::span<double> d) {
    const std::size_t n = d.size();
    const auto xi_block = x.subspan(part.offset(i), n);
    RandomStream noise(cfg.seed, key(cfg, i, Purpose::problem_noise, k));
    RandomStream dirs(cfg.seed, key(cfg, i, Purpose::direction, k));
    auto vs = std::span<double>(v).first(n);
    auto ps = std::span<double>(zp).first(n);
    auto ms = std::span<double>(zm).first(n);
    auto gs = std::span<double>(gm).first(n);
    std::fill_n(acc_h.begin(), n, 0.0);
    std::fill_n(acc_m.begin(), n, 0.0);
    for (std::size_t l = 0; l < S; ++l) {
      const NoiseSample xi = game.draw_noise(noise);
      sample_sphere(dirs, eta, vs);
      for (std::size_t j = 0; j < n; ++j) {
        ps[j] = xi_block[j] + vs[j];
        ms[j] = xi_block[j] - vs[j];
      }
      const double diff = h(i, std::span<const double>(ps), xi, +1, k) - h(i, std::span<const double>(ms), xi, -1, k);
      // (n / 2 eta) diff v / ||v||, with ||v|| = eta
      const double c = static_cast<double>(n) * diff / (2.0 * eta * eta);
      m_grad(i, x, xi, gs);
      for (std::size_t j = 0; j < n; ++j) {
        acc_h[j] += c * vs[j];
        acc_m[j] += gs[j];
      }
    }
    for (std::size_t j = 0; j < n; ++j) d[j] = (acc_h[j] + acc_m[j]) / static_cast<double>(S);
  };
  return run_loop(game, cfg, N * S, cost, direction);
}

}  // namespace

RunRecord rs_rsg_run(const StructuredGameModel& game, const SolverConfig& cfg) {
  const auto h = [&](std::size_t i, std::span<const double> z, NoiseSample xi, int, std::size_t) {
    return game.sampled_private_cost(i, z, xi);
  };
  const auto m = [&](std::size_t i, std::span<const double> x, NoiseSample xi, std::span<double> out) {
    game.sampled_coupling_gradient(i, x, xi, out);
  };
  return smoothed_run(game, cfg, h, m, [](std::size_t) { return std::uint64_t{0}; });
}

RunRecord b_rs_rsg_run(const HierarchicalGameModel& game, const SolverConfig& cfg) {
  const auto& fpart = game.follower_sets().partition();
  const bool exact = cfg.lower.mode == FollowerMode::exact;
  if (exact && !game.has_exact_follower()) throw MissingOracle(game.name() + ": no exact follower");
  const std::size_t N = game.players();
  for (std::size_t i = 0; i < N; ++i) resolve_alpha0(game, i, cfg.lower);  // validate before running
  std::vector<double> y(fpart.max_dim());
  // The SA noise for the + and - solves of player i at iteration k comes from two dedicated
  // streams; each solve consumes t_k draws, so draw l of the batch uses the l-th block.
  std::size_t cur_k = static_cast<std::size_t>(-1), cur_i = static_cast<std::size_t>(-1);
  std::optional<RandomStream> plus, minus;
  const auto h = [&](std::size_t i, std::span<const double> z, NoiseSample xi, int sign, std::size_t k) {
    auto ys = std::span<double>(y).first(fpart.dim(i));
    if (exact) {
      game.exact_follower(i, z, ys);
    } else {
      if (k != cur_k || i != cur_i) {
        plus.emplace(cfg.seed, key(cfg, i, Purpose::lower_plus, k));
        minus.emplace(cfg.seed, key(cfg, i, Purpose::lower_minus, k));
        cur_k = k;
        cur_i = i;
      }
      sa_lower_solve(game, i, z, lower_iterations(cfg.lower, k), cfg.lower, sign > 0 ? *plus : *minus, ys);
    }
    return game.sampled_private_cost(i, z, ys, xi);
  };
  const auto m = [&](std::size_t i, std::span<const double> x, NoiseSample xi, std::span<double> out) {
    game.sampled_coupling_gradient(i, x, xi, out);
  };
  const auto ll = [&](std::size_t k) -> std::uint64_t {
    if (exact) return 0;
    return 2 * static_cast<std::uint64_t>(N) * cfg.batch * lower_iterations(cfg.lower, k);
  };
  return smoothed_run(game, cfg, h, m, ll);
}

}  // namespace nashsg
