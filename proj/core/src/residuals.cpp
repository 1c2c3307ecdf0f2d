#include "nashsg/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "nashsg/error.hpp"
#include "nashsg/smoothing.hpp"

namespace nashsg {

namespace {

constexpr std::size_t kBatches = 10;

void check_gamma(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("residual: gamma must be positive");
}

void check_profile(const GameBase& game, std::span<const double> x) {
  if (x.size() != game.partition().total_dim()) throw DimensionError("residual: profile length mismatch");
}

/// Minimizes a unimodal q over [lo, hi] by golden-section search.
template <class Q>
double golden_min(Q q, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double qc = q(c), qd = q(d);
  while (b - a > tol) {
    if (qc <= qd) {
      b = d;
      d = c;
      qd = qc;
      c = b - kInvPhi * (b - a);
      qc = q(c);
    } else {
      a = c;
      c = d;
      qc = qd;
      d = a + kInvPhi * (b - a);
      qd = q(d);
    }
  }
  return std::min({q(a), q(b), q(0.5 * (a + b))});
}

}  // namespace

ResidualReport summarize(std::vector<double> per_path, double gamma, std::size_t samples) {
  ResidualReport r;
  r.gamma = gamma;
  r.samples = samples;
  const auto n = static_cast<double>(per_path.size());
  if (!per_path.empty()) {
    double s = 0.0;
    for (double v : per_path) s += v;
    r.mean_sq = s / n;
    if (per_path.size() > 1) {
      double ss = 0.0;
      for (double v : per_path) ss += (v - r.mean_sq) * (v - r.mean_sq);
      r.std_err = std::sqrt(ss / (n - 1.0) / n);
    }
  }
  r.per_path = std::move(per_path);
  return r;
}

std::vector<double> projected_residual(std::span<const double> x, std::span<const double> F, const BoxSet& box,
                                       double gamma) {
  check_gamma(gamma);
  if (x.size() != F.size() || x.size() != box.dim()) throw DimensionError("projected_residual: length mismatch");
  std::vector<double> G(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double p = std::clamp(x[j] - gamma * F[j], box.lower()[j], box.upper()[j]);
    G[j] = (x[j] - p) / gamma;
  }
  return G;
}

double projected_residual_sq(std::span<const double> x, std::span<const double> F, const BoxSet& box,
                             double gamma) {
  return norm2(projected_residual(x, F, box, gamma));
}

ResidualReport vi_residual(const SmoothGameModel& game, std::span<const double> x, double gamma,
                           GradientSource source) {
  check_gamma(gamma);
  check_profile(game, x);
  const auto& box = game.strategy_sets().flat();
  if (source.exact) {
    if (!game.has_exact_gradient()) throw MissingOracle(game.name() + ": no gradient source for the residual");
    const auto F = exact_pseudo_gradient(game, x);
    return summarize({projected_residual_sq(x, F, box, gamma)}, gamma, 0);
  }
  if (source.samples < kBatches) throw DomainError("vi_residual: need at least 10 Monte Carlo samples");
  const auto& part = game.partition();
  const std::size_t per = source.samples / kBatches;
  std::vector<double> total(x.size(), 0.0), batch(x.size()), g(part.max_dim());
  std::vector<double> batch_values;
  for (std::size_t b = 0; b < kBatches; ++b) {
    std::fill(batch.begin(), batch.end(), 0.0);
    for (std::size_t i = 0; i < part.players(); ++i) {
      RandomStream s(source.seed, StreamKey{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i),
                                            Purpose::estimation, 0});
      auto gi = std::span<double>(g).first(part.dim(i));
      for (std::size_t l = 0; l < per; ++l) {
        game.sampled_gradient(i, x, game.draw_noise(s), gi);
        for (std::size_t j = 0; j < gi.size(); ++j) batch[part.offset(i) + j] += gi[j] / static_cast<double>(per);
      }
    }
    for (std::size_t j = 0; j < x.size(); ++j) total[j] += batch[j] / static_cast<double>(kBatches);
    batch_values.push_back(projected_residual_sq(x, batch, box, gamma));
  }
  ResidualReport r = summarize(std::move(batch_values), gamma, per * kBatches);
  r.mean_sq = projected_residual_sq(x, total, box, gamma);
  return r;
}

ResidualReport vi_residual(const StructuredGameModel& game, std::span<const double> x, double gamma) {
  check_gamma(gamma);
  check_profile(game, x);
  const auto F = exact_pseudo_gradient(game, x);
  return summarize({projected_residual_sq(x, F, game.strategy_sets().flat(), gamma)}, gamma, 0);
}

std::vector<double> smoothed_pseudo_gradient(const StructuredGameModel& game, std::span<const double> x,
                                             double eta) {
  check_profile(game, x);
  const auto& part = game.partition();
  std::vector<double> F(x.size());
  for (std::size_t i = 0; i < part.players(); ++i) {
    auto Fi = std::span<double>(F).subspan(part.offset(i), part.dim(i));
    game.coupling_gradient(i, x, Fi);
    Fi[0] += smoothed_private_gradient(game, i, x[part.offset(i)], eta);
  }
  return F;
}

ResidualReport smoothed_residual(const StructuredGameModel& game, std::span<const double> x, double gamma,
                                 double eta, std::size_t mc_samples, std::uint64_t seed) {
  check_gamma(gamma);
  check_profile(game, x);
  const auto& part = game.partition();
  const auto& box = game.strategy_sets().flat();
  bool scalar = true;
  for (std::size_t i = 0; i < part.players(); ++i) scalar = scalar && part.dim(i) == 1;
  if (scalar) return summarize({projected_residual_sq(x, smoothed_pseudo_gradient(game, x, eta), box, gamma)}, gamma);

  if (mc_samples < kBatches) throw DomainError("smoothed_residual: need at least 10 Monte Carlo samples");
  const std::size_t per = mc_samples / kBatches;
  std::vector<double> m(x.size()), total(x.size(), 0.0), batch(x.size());
  for (std::size_t i = 0; i < part.players(); ++i)
    game.coupling_gradient(i, x, std::span<double>(m).subspan(part.offset(i), part.dim(i)));
  std::vector<double> batch_values;
  for (std::size_t b = 0; b < kBatches; ++b) {
    std::fill(batch.begin(), batch.end(), 0.0);
    for (std::size_t i = 0; i < part.players(); ++i) {
      const StreamKey key{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(i), Purpose::estimation, 0};
      RandomStream noise(seed, key);
      RandomStream dirs(seed, StreamKey{key.path, key.player, Purpose::direction, 0});
      const auto xi_block = x.subspan(part.offset(i), part.dim(i));
      for (std::size_t l = 0; l < per; ++l) {
        const auto e = two_point_gradient(game, i, xi_block, eta, game.draw_noise(noise), dirs);
        for (std::size_t j = 0; j < e.value.size(); ++j)
          batch[part.offset(i) + j] += e.value[j] / static_cast<double>(per);
      }
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      batch[j] += m[j];
      total[j] += batch[j] / static_cast<double>(kBatches);
    }
    batch_values.push_back(projected_residual_sq(x, batch, box, gamma));
  }
  ResidualReport r = summarize(std::move(batch_values), gamma, per * kBatches);
  r.mean_sq = projected_residual_sq(x, total, box, gamma);
  return r;
}

double clarke_residual(const StructuredGameModel& game, std::span<const double> x, double gamma) {
  check_gamma(gamma);
  check_profile(game, x);
  const auto& part = game.partition();
  const auto& box = game.strategy_sets().flat();
  double total = 0.0;
  for (std::size_t i = 0; i < part.players(); ++i) {
    const auto* h = game.private_cost_pwl(i);
    if (h == nullptr || part.dim(i) != 1) throw MissingOracle(game.name() + ": h_i is not piecewise linear");
    const std::size_t j = part.offset(i);
    double m = 0.0;
    game.coupling_gradient(i, x, std::span<double>(&m, 1));
    const Interval U = h->clarke(x[j]);
    const auto q = [&](double u) {
      const double p = std::clamp(x[j] - gamma * (u + m), box.lower()[j], box.upper()[j]);
      const double g = (x[j] - p) / gamma;
      return g * g;
    };
    total += (U.hi > U.lo) ? golden_min(q, U.lo, U.hi, 1e-10) : q(U.lo);
  }
  return total;
}

Interval delta_clarke(const PiecewiseLinear1D& f, double x, double eta) {
  if (!(eta > 0.0)) throw DomainError("delta_clarke: eta must be positive");
  return f.slope_hull(x - eta, x + eta);
}

double deviation_bound(const PiecewiseLinear1D& f, double x, double eta) {
  const Interval A = delta_clarke(f, x, eta);
  const Interval B = f.clarke(x);
  return std::max(B.distance_to(A.lo), B.distance_to(A.hi));
}

}  // namespace nashsg
