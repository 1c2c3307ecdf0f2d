#include "nashsg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nashsg/cournot.hpp"
#include "nashsg/error.hpp"
#include "nashsg/potential.hpp"
#include "nashsg/residuals.hpp"
#include "nashsg/smoothing.hpp"
#include "nashsg/smoothness.hpp"

namespace nashsg {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::rsg: return "rsg";
    case SolverKind::rs_rsg: return "rs-rsg";
    case SolverKind::b_rs_rsg: return "b-rs-rsg";
  }
  return "?";
}

namespace {

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expect) {
  throw ConfigError("field '" + key + "': invalid value '" + value + "' (expected " + expect + ")");
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) bad_value(key, v, "a finite number");
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v, "a finite number");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc() && ptr == v.data() + v.size()) return out;
  // Accept integral scientific notation such as 1e6.
  const double d = parse_real(key, v);
  if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15) bad_value(key, v, "a nonnegative integer");
  return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad_value(key, v, "a comma-separated list of numbers");
    out.push_back(parse_real(key, item));
  }
  if (out.empty()) bad_value(key, v, "a non-empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

SolverKind default_solver(const std::string& game) {
  if (game == "hier4") return SolverKind::b_rs_rsg;
  if (game == "cournot6-smooth") return SolverKind::rsg;
  return SolverKind::rs_rsg;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& v, bool& solver_set) {
  if (key == "name") {
    if (v.empty() || v.find_first_of("/\\") != std::string::npos) bad_value(key, v, "a plain file stem");
    c.name = v;
  } else if (key == "game") {
    c.game = v;
  } else if (key == "solver") {
    if (v == "rsg") c.solver = SolverKind::rsg;
    else if (v == "rs-rsg") c.solver = SolverKind::rs_rsg;
    else if (v == "b-rs-rsg") c.solver = SolverKind::b_rs_rsg;
    else bad_value(key, v, "rsg, rs-rsg or b-rs-rsg");
    solver_set = true;
  } else if (key == "eta" || key == "eta_sweep") {
    c.eta_sweep = parse_list(key, v);
  } else if (key == "thresholds") {
    c.thresholds = parse_list(key, v);
  } else if (key == "budget" || key == "M") {
    c.budget = parse_count(key, v);
  } else if (key == "ll_budget") {
    c.ll_budget = parse_count(key, v);
  } else if (key == "paths") {
    c.paths = parse_count(key, v);
  } else if (key == "seed") {
    c.seed = parse_count(key, v);
  } else if (key == "batch") {
    if (v == "auto") c.batch.reset();
    else c.batch = parse_count(key, v);
  } else if (key == "max_iters") {
    c.max_iters = parse_count(key, v);
  } else if (key == "gamma") {
    if (v == "auto") c.gamma.reset();
    else c.gamma = parse_real(key, v);
  } else if (key == "smoothness") {
    if (v == "analytic") c.numeric_smoothness = false;
    else if (v == "numeric") c.numeric_smoothness = true;
    else bad_value(key, v, "analytic or numeric");
  } else if (key == "output_rule") {
    if (v == "uniform") c.output_rule = OutputRule::uniform;
    else if (v == "step_weighted") c.output_rule = OutputRule::step_weighted;
    else bad_value(key, v, "uniform or step_weighted");
  } else if (key == "x0") {
    if (v == "default") c.x0.clear();
    else c.x0 = parse_list(key, v);
  } else if (key == "lower.alpha0") {
    c.lower.alpha0 = (v == "auto") ? 0.0 : parse_real(key, v);
  } else if (key == "lower.Gamma") {
    c.lower.Gamma = parse_real(key, v);
  } else if (key == "lower.delta") {
    c.lower.delta = parse_real(key, v);
  } else if (key == "lower.t_fixed") {
    c.lower.t_fixed = parse_count(key, v);
  } else if (key == "follower") {
    if (v == "sa") c.lower.mode = FollowerMode::sa;
    else if (v == "exact") c.lower.mode = FollowerMode::exact;
    else bad_value(key, v, "sa or exact");
  } else if (key == "stride") {
    if (v == "auto") c.stride.reset();
    else c.stride = parse_count(key, v);
  } else if (key == "metric") {
    if (v == "iterate") c.metric = MetricMode::iterate;
    else if (v == "running_mean") c.metric = MetricMode::running_mean;
    else bad_value(key, v, "iterate or running_mean");
  } else if (key == "jobs") {
    c.jobs = parse_count(key, v);
  } else if (key == "out_dir") {
    c.out_dir = v;
  } else {
    throw ConfigError("unknown field '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig c;
  bool solver_set = false;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + "field '" + key + "' has no value");
    if (!seen.insert(key).second) throw ConfigError(where + "field '" + key + "' given twice");
    try {
      apply(c, key, value, solver_set);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (c.game.empty()) throw ConfigError("field 'game' is required");
  if (!solver_set) c.solver = default_solver(c.game);
  if (c.solver == SolverKind::rsg && c.eta_sweep.empty()) c.eta_sweep = {0.0};
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void validate(const ExperimentConfig& c) {
  const GameBundle g = make_game(c.game);  // throws with the list of known games
  switch (c.solver) {
    case SolverKind::rsg:
      if (!g.smooth) throw ConfigError("field 'solver': rsg needs a smooth game (try cournot6-smooth)");
      break;
    case SolverKind::rs_rsg:
      if (!g.structured) throw ConfigError("field 'solver': rs-rsg needs a nonsmooth structured game");
      break;
    case SolverKind::b_rs_rsg:
      if (!g.hierarchical) throw ConfigError("field 'solver': b-rs-rsg needs a hierarchical game (hier4)");
      break;
  }
  if (c.eta_sweep.empty()) throw ConfigError("field 'eta': required for " + solver_name(c.solver));
  for (double e : c.eta_sweep) {
    if (c.solver != SolverKind::rsg && !(e > 0.0)) throw ConfigError("field 'eta': values must be positive");
    if (c.solver != SolverKind::rsg && c.game == "hier4" && !(e < 1.0))
      throw ConfigError("field 'eta': hier4 needs eta < 1 (leader cost is log(x + 1))");
  }
  if (c.thresholds.empty()) throw ConfigError("field 'thresholds': need at least one level");
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    if (!(c.thresholds[i] > 0.0)) throw ConfigError("field 'thresholds': levels must be positive");
    if (i > 0 && !(c.thresholds[i] < c.thresholds[i - 1]))
      throw ConfigError("field 'thresholds': levels must be strictly decreasing");
  }
  if (c.paths < 1) throw ConfigError("field 'paths': need at least one path");
  if (c.paths > 0xFFFF) throw ConfigError("field 'paths': at most 65535 paths");
  if (c.budget == 0) throw ConfigError("field 'budget': must be positive");
  if (c.batch && *c.batch == 0) throw ConfigError("field 'batch': must be positive");
  if (c.gamma && !(*c.gamma > 0.0)) throw ConfigError("field 'gamma': must be positive");
  if (c.stride && *c.stride == 0) throw ConfigError("field 'stride': must be positive");
  if (c.jobs < 1) throw ConfigError("field 'jobs': must be positive");
  if (!(c.lower.Gamma > 0.0)) throw ConfigError("field 'lower.Gamma': must be positive");
  if (!(c.lower.delta > 0.0)) throw ConfigError("field 'lower.delta': must be positive");
  if (c.lower.alpha0 < 0.0) throw ConfigError("field 'lower.alpha0': must be positive or auto");
  if (c.solver == SolverKind::b_rs_rsg) {
    for (std::size_t i = 0; i < g.hierarchical->players(); ++i) {
      const double mu = g.hierarchical->strong_monotonicity(i);
      if (c.lower.alpha0 > 0.0 && !(2.0 * mu * c.lower.alpha0 > 1.0))
        throw ConfigError("field 'lower.alpha0': must exceed 1/(2 mu) = " + format_double(0.5 / mu));
    }
  }
  const auto& box = (g.smooth ? g.smooth->strategy_sets() : g.structured->strategy_sets()).flat();
  if (!c.x0.empty()) {
    if (c.x0.size() != 1 && c.x0.size() != box.dim())
      throw ConfigError("field 'x0': expected 1 or " + std::to_string(box.dim()) + " values");
    std::vector<double> x = c.x0.size() == 1 ? std::vector<double>(box.dim(), c.x0[0]) : c.x0;
    if (!box.contains(x)) throw ConfigError("field 'x0': start point lies outside X");
  }
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& c) {
  std::map<std::string, std::string> e;
  e["name"] = c.name;
  e["game"] = c.game;
  e["solver"] = solver_name(c.solver);
  e["eta"] = join(c.eta_sweep);
  e["thresholds"] = join(c.thresholds);
  e["budget"] = std::to_string(c.budget);
  e["ll_budget"] = std::to_string(c.ll_budget);
  e["paths"] = std::to_string(c.paths);
  e["seed"] = std::to_string(c.seed);
  e["batch"] = c.batch ? std::to_string(*c.batch) : "auto";
  e["max_iters"] = std::to_string(c.max_iters);
  e["gamma"] = c.gamma ? format_double(*c.gamma) : "auto";
  e["smoothness"] = c.numeric_smoothness ? "numeric" : "analytic";
  e["output_rule"] = c.output_rule == OutputRule::uniform ? "uniform" : "step_weighted";
  e["x0"] = c.x0.empty() ? "default" : join(c.x0);
  e["lower.alpha0"] = c.lower.alpha0 > 0.0 ? format_double(c.lower.alpha0) : "auto";
  e["lower.Gamma"] = format_double(c.lower.Gamma);
  e["lower.delta"] = format_double(c.lower.delta);
  e["lower.t_fixed"] = std::to_string(c.lower.t_fixed);
  e["follower"] = c.lower.mode == FollowerMode::sa ? "sa" : "exact";
  e["stride"] = c.stride ? std::to_string(*c.stride) : "auto";
  e["metric"] = c.metric == MetricMode::iterate ? "iterate" : "running_mean";
  e["jobs"] = std::to_string(c.jobs);
  e["out_dir"] = c.out_dir.string();
  return e;
}

namespace {

using Metric = std::function<double(std::span<const double>)>;

std::vector<double> start_point(const ExperimentConfig& cfg, const GameBundle& g) {
  if (cfg.x0.empty()) return g.default_x0;
  if (cfg.x0.size() == 1) return std::vector<double>(g.default_x0.size(), cfg.x0[0]);
  return cfg.x0;
}

std::size_t grid_points(std::size_t dim) {
  constexpr double kGridBudget = 2e5;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::pow(kGridBudget, 1.0 / dim))));
}

Metric make_metric(const ExperimentConfig& cfg, const GameBundle& g, double eta, double gamma) {
  if (cfg.solver == SolverKind::rsg) {
    auto game = g.smooth;
    return [game, gamma](std::span<const double> x) {
      return projected_residual_sq(x, exact_pseudo_gradient(*game, x), game->strategy_sets().flat(), gamma);
    };
  }
  auto game = g.structured;  // the exact-follower reduction for hier4
  return [game, eta, gamma](std::span<const double> x) {
    return projected_residual_sq(x, smoothed_pseudo_gradient(*game, x, eta), game->strategy_sets().flat(), gamma);
  };
}

/// sup over a few probe points of the empirical variance of the sampled gradient.
double empirical_sigma(const SmoothGameModel& game, std::uint64_t seed) {
  const auto& box = game.strategy_sets().flat();
  const auto& part = game.partition();
  std::vector<std::vector<double>> probes{box.lower(), box.upper(), box.midpoint()};
  constexpr std::size_t kDraws = 20000;
  double worst = 0.0;
  std::vector<double> g(part.max_dim()), mean(part.max_dim()), sq(part.max_dim());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    double total = 0.0;
    for (std::size_t i = 0; i < part.players(); ++i) {
      RandomStream s(seed, StreamKey{static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(i),
                                     Purpose::estimation, 1});
      const std::size_t n = part.dim(i);
      std::fill(mean.begin(), mean.end(), 0.0);
      std::fill(sq.begin(), sq.end(), 0.0);
      for (std::size_t l = 0; l < kDraws; ++l) {
        game.sampled_gradient(i, probes[p], game.draw_noise(s), std::span<double>(g).first(n));
        for (std::size_t j = 0; j < n; ++j) {
          mean[j] += g[j];
          sq[j] += g[j] * g[j];
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double m = mean[j] / kDraws;
        total += sq[j] / kDraws - m * m;
      }
    }
    worst = std::max(worst, total);
  }
  return std::sqrt(std::max(0.0, worst));
}

}  // namespace

RunPlan plan_run(const ExperimentConfig& cfg, double eta) {
  const GameBundle g = make_game(cfg.game);
  RunPlan plan;
  plan.eta = eta;
  std::size_t N = 0;
  if (cfg.solver == SolverKind::rsg) {
    const auto& game = *g.smooth;
    N = game.players();
    const auto& box = game.strategy_sets().flat();
    plan.L = jacobian_norm_fd([&](std::span<const double> x) { return exact_pseudo_gradient(game, x); },
                              box.midpoint(), 1e-4);
    plan.bounds = estimate_potential_bounds(g.potential, box, grid_points(box.dim()));
    plan.sigma = empirical_sigma(game, cfg.seed);
  } else {
    const auto& game = *g.structured;
    N = game.players();
    const auto& box = game.strategy_sets().flat();
    const auto Peta = smoothed_potential(g.structured, g.potential, eta);
    plan.bounds = estimate_potential_bounds(Peta, box, grid_points(box.dim()));
    std::vector<std::vector<double>> probes;
    if (cfg.numeric_smoothness) {
      RandomStream s(cfg.seed, StreamKey{0, 0, Purpose::estimation, 2});
      for (int p = 0; p < 16; ++p) {
        std::vector<double> x(box.dim());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = sample_uniform(s, box.lower()[j], box.upper()[j]);
        probes.push_back(std::move(x));
      }
    }
    const auto est = estimate_smoothness(
        game, eta, cfg.numeric_smoothness ? SmoothnessMethod::finite_difference : SmoothnessMethod::analytic,
        probes, 1e-3, plan.bounds);
    plan.L = est.L;
    double Lmax = 0.0;
    for (std::size_t i = 0; i < N; ++i) Lmax = std::max(Lmax, game.private_lipschitz(i));
    const std::size_t nmax = game.partition().max_dim();
    if (cfg.solver == SolverKind::rs_rsg) {
      plan.sigma = rs_sigma(Lmax, nmax, game.coupling_variance_bound());
    } else {
      const auto& hg = *g.hierarchical;
      double Ly = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        Ly = std::max(Ly, hg.follower_lipschitz(i));
        plan.eps_up = std::max(
            plan.eps_up, sa_inexactness(hg, i, cfg.lower, static_cast<double>(lower_iterations(cfg.lower, 0))));
      }
      plan.sigma = hierarchical_sigma(Lmax, Ly, nmax, plan.eps_up, eta, hg.coupling_variance_bound());
    }
  }
  plan.D = potential_radius(plan.bounds, plan.L);
  if (cfg.batch) {
    plan.S = *cfg.batch;
  } else {
    if (!(plan.D > 0.0)) throw ConfigError("field 'batch': potential range is zero, set batch explicitly");
    plan.S = batch_size_from_budget(static_cast<double>(cfg.budget), plan.sigma, plan.L, plan.D);
  }
  plan.T = iterations_from_budget(cfg.budget, N, plan.S);
  if (cfg.max_iters > 0) plan.T = std::min(plan.T, cfg.max_iters);
  if (plan.T == 0) throw ConfigError("field 'budget': too small for one iteration with S = " + std::to_string(plan.S));
  plan.gamma = cfg.gamma ? *cfg.gamma : 1.0 / (2.0 * plan.L);
  plan.stride = cfg.stride ? *cfg.stride : std::max<std::size_t>(1, plan.T / 500);
  const auto x0 = start_point(cfg, g);
  plan.initial_residual = make_metric(cfg, g, eta, plan.gamma)(x0);
  return plan;
}

std::optional<std::size_t> first_crossing(const std::vector<double>& curve, double threshold) {
  for (std::size_t k = 0; k < curve.size(); ++k)
    if (curve[k] <= threshold) return k;
  return std::nullopt;
}

namespace {

struct PathResult {
  std::vector<TracePoint> points;  // full resolution, k = 0..K
  std::string error;
  bool ok = false;
};

PathResult run_path(const ExperimentConfig& cfg, const GameBundle& g, const RunPlan& plan, std::size_t path) {
  PathResult out;
  SolverConfig sc;
  sc.eta = plan.eta;
  sc.gamma = plan.gamma;
  sc.batch = plan.S;
  sc.max_iters = plan.T;
  sc.budget = cfg.budget;
  sc.ll_budget = cfg.ll_budget;
  sc.output_rule = cfg.output_rule;
  sc.L = plan.L;
  sc.lower = cfg.lower;
  sc.seed = cfg.seed;
  sc.path = static_cast<std::uint32_t>(path);
  sc.x0 = start_point(cfg, g);
  sc.full_trace = true;
  sc.metric = make_metric(cfg, g, plan.eta, plan.gamma);
  sc.metric_stride = 1;
  RunRecord rec;
  switch (cfg.solver) {
    case SolverKind::rsg: rec = rsg_run(*g.smooth, sc); break;
    case SolverKind::rs_rsg: rec = rs_rsg_run(*g.structured, sc); break;
    case SolverKind::b_rs_rsg: rec = b_rs_rsg_run(*g.hierarchical, sc); break;
  }
  out.points = std::move(rec.trace);
  if (cfg.metric == MetricMode::running_mean) {
    double sum = 0.0;
    for (std::size_t j = 1; j < out.points.size(); ++j) {
      sum += out.points[j].value;
      out.points[j].value = sum / static_cast<double>(j);
    }
  }
  out.ok = true;
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + p.string() + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const GameBundle g = make_game(cfg.game);
  ExperimentResult res;
  for (double eta : cfg.eta_sweep) res.plans.push_back(plan_run(cfg, eta));

  const std::size_t E = cfg.eta_sweep.size();
  const std::size_t P = cfg.paths;
  std::vector<PathResult> results(E * P);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < results.size(); t = next++) {
      try {
        results[t] = run_path(cfg, g, res.plans[t / P], t % P);
      } catch (const std::exception& e) {
        results[t].error = e.what();
      }
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, results.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  res.mean_curve.resize(E);
  for (std::size_t e = 0; e < E; ++e) {
    const RunPlan& plan = res.plans[e];
    std::size_t len = std::numeric_limits<std::size_t>::max();
    const PathResult* first_ok = nullptr;
    std::size_t ok = 0;
    for (std::size_t p = 0; p < P; ++p) {
      const auto& r = results[e * P + p];
      if (!r.ok) {
        res.failures.push_back({plan.eta, p, r.error});
        continue;
      }
      if (!first_ok) first_ok = &r;
      ++ok;
      len = std::min(len, r.points.size());
      const std::size_t last = r.points.back().k;
      // Rows cover the support {1..T} of P_R; x^0 only enters the averaged curve.
      for (const auto& pt : r.points) {
        if (pt.k > 0 && (pt.k % plan.stride == 0 || pt.k == last))
          res.trace.push_back({plan.eta, p, pt.k, pt.zo, pt.fo, pt.ll, pt.value});
      }
    }
    if (ok == 0) {
      for (double th : cfg.thresholds) res.table.push_back({plan.eta, th, std::nullopt, 0, 0, 0});
      continue;
    }
    auto& curve = res.mean_curve[e];
    curve.assign(len, 0.0);
    for (std::size_t p = 0; p < P; ++p) {
      const auto& r = results[e * P + p];
      if (!r.ok) continue;
      for (std::size_t k = 0; k < len; ++k) curve[k] += r.points[k].value / static_cast<double>(ok);
    }
    for (double th : cfg.thresholds) {
      TableRow row{plan.eta, th, first_crossing(curve, th), 0, 0, 0};
      if (row.iters) {
        const auto& pt = first_ok->points[*row.iters];
        row.zo = pt.zo;
        row.fo = pt.fo;
        row.ll = pt.ll;
      }
      res.table.push_back(row);
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  res.trace_file = cfg.out_dir / (cfg.name + "_trace.csv");
  res.table_file = cfg.out_dir / (cfg.name + "_table.csv");
  res.meta_file = cfg.out_dir / (cfg.name + "_meta.json");

  std::string trace = "eta,path,k,zo_samples,fo_samples,ll_samples,residual_sq\n";
  for (const auto& r : res.trace) {
    trace += format_double(r.eta) + "," + std::to_string(r.path) + "," + std::to_string(r.k) + "," +
             std::to_string(r.zo) + "," + std::to_string(r.fo) + "," + std::to_string(r.ll) + "," +
             format_double(r.residual_sq) + "\n";
  }
  std::string table = "eta,threshold,iters,zo_samples,fo_samples,ll_samples\n";
  for (const auto& r : res.table) {
    table += format_double(r.eta) + "," + format_double(r.threshold) + ",";
    if (r.iters) {
      table += std::to_string(*r.iters) + "," + std::to_string(r.zo) + "," + std::to_string(r.fo) + "," +
               std::to_string(r.ll) + "\n";
    } else {
      table += "NA,NA,NA,NA\n";
    }
  }

  nlohmann::ordered_json meta;
  meta["config"] = config_echo(cfg);
  meta["residual"] = cfg.solver == SolverKind::rsg ? "||G_gamma(x)||^2 with exact F"
                                                   : "||G^eta_gamma(x)||^2 with closed-form F^eta";
  meta["paths_failed"] = nlohmann::json::array();
  for (const auto& f : res.failures) meta["paths_failed"].push_back({{"eta", f.eta}, {"path", f.path}, {"error", f.error}});
  meta["plans"] = nlohmann::json::array();
  for (const auto& p : res.plans) {
    nlohmann::ordered_json j;
    j["eta"] = p.eta;
    j["L"] = p.L;
    j["D"] = p.D;
    j["sigma"] = p.sigma;
    if (cfg.solver == SolverKind::b_rs_rsg) j["eps_up"] = p.eps_up;
    j["P_max"] = p.bounds.max;
    j["P_min"] = p.bounds.min;
    j["P_bounds_estimated"] = p.bounds.estimated;
    j["S"] = p.S;
    j["T"] = p.T;
    j["gamma"] = p.gamma;
    j["stride"] = p.stride;
    j["initial_residual_sq"] = p.initial_residual;
    meta["plans"].push_back(j);
  }

  write_file(res.trace_file, trace);
  write_file(res.table_file, table);
  write_file(res.meta_file, meta.dump(2) + "\n");
  return res;
}

}  // namespace nashsg
