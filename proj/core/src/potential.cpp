#include "nashsg/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashsg/error.hpp"
#include "nashsg/smoothing.hpp"

namespace nashsg {

namespace {

template <class Objective>
double identity_gap(const GameBase& game, const PotentialOracle& P, std::size_t i, std::span<const double> x,
                    std::span<const double> b_i, Objective f) {
  const auto& part = game.partition();
  if (x.size() != part.total_dim() || b_i.size() != part.dim(i))
    throw DimensionError("potential_identity_gap: length mismatch");
  std::vector<double> y(x.begin(), x.end());
  std::copy(b_i.begin(), b_i.end(), y.begin() + static_cast<std::ptrdiff_t>(part.offset(i)));
  return std::abs((P(x) - P(y)) - (f(i, x) - f(i, y)));
}

template <class Gradient>
double gradient_check(const GameBase& game, const PotentialOracle& P, std::span<const double> x, double h,
                      Gradient grad) {
  if (!(h > 0.0)) throw DomainError("potential_gradient_check: fd_step must be positive");
  const auto& part = game.partition();
  if (x.size() != part.total_dim()) throw DimensionError("potential_gradient_check: profile length mismatch");
  const std::vector<double> F = grad(x);
  std::vector<double> y(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double keep = y[j];
    y[j] = keep + h;
    const double up = P(y);
    y[j] = keep - h;
    const double dn = P(y);
    y[j] = keep;
    worst = std::max(worst, std::abs((up - dn) / (2.0 * h) - F[j]));
  }
  return worst;
}

void refine(const PotentialOracle& P, const BoxSet& box, std::vector<double>& x, double& fx, double step,
            double sign) {
  // Compass search on sign * P (sign = +1 minimizes, -1 maximizes).
  const std::size_t n = x.size();
  while (step > 1e-10) {
    bool moved = false;
    for (std::size_t j = 0; j < n; ++j) {
      for (double d : {step, -step}) {
        const double keep = x[j];
        x[j] = std::clamp(keep + d, box.lower()[j], box.upper()[j]);
        const double v = P(x);
        if (sign * v < sign * fx) {
          fx = v;
          moved = true;
        } else {
          x[j] = keep;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
}

}  // namespace

double potential_identity_gap(const StructuredGameModel& game, const PotentialOracle& P, std::size_t i,
                              std::span<const double> x, std::span<const double> b_i) {
  return identity_gap(game, P, i, x, b_i,
                      [&](std::size_t j, std::span<const double> z) { return game.objective(j, z); });
}

double potential_identity_gap(const SmoothGameModel& game, const PotentialOracle& P, std::size_t i,
                              std::span<const double> x, std::span<const double> b_i) {
  return identity_gap(game, P, i, x, b_i,
                      [&](std::size_t j, std::span<const double> z) { return game.objective(j, z); });
}

double potential_gradient_check(const SmoothGameModel& game, const PotentialOracle& P, std::span<const double> x,
                                double fd_step) {
  if (!game.has_exact_gradient()) throw MissingOracle(game.name() + ": no exact gradient");
  return gradient_check(game, P, x, fd_step,
                        [&](std::span<const double> z) { return exact_pseudo_gradient(game, z); });
}

double potential_gradient_check(const StructuredGameModel& game, const PotentialOracle& P,
                                std::span<const double> x, double fd_step) {
  if (!game.has_analytic()) throw MissingOracle(game.name() + ": no analytic gradient");
  return gradient_check(game, P, x, fd_step,
                        [&](std::span<const double> z) { return exact_pseudo_gradient(game, z); });
}

PotentialBounds estimate_potential_bounds(const PotentialOracle& P, const BoxSet& box, std::size_t points_per_dim,
                                          std::size_t max_grid) {
  if (points_per_dim < 2) throw DomainError("estimate_potential_bounds: need at least 2 points per dimension");
  const std::size_t n = box.dim();
  if (n == 0) throw DimensionError("estimate_potential_bounds: empty box");
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (total > max_grid / points_per_dim) throw BudgetError("estimate_potential_bounds: grid too large");
    total *= points_per_dim;
  }

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  std::vector<double> xmin, xmax;
  double pmin = std::numeric_limits<double>::infinity();
  double pmax = -pmin;
  const double denom = static_cast<double>(points_per_dim - 1);
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = static_cast<double>(idx[j]) / denom;
      x[j] = box.lower()[j] + t * (box.upper()[j] - box.lower()[j]);
    }
    const double v = P(x);
    if (v < pmin) {
      pmin = v;
      xmin = x;
    }
    if (v > pmax) {
      pmax = v;
      xmax = x;
    }
    for (std::size_t j = 0; j < n; ++j) {  // odometer
      if (++idx[j] < points_per_dim) break;
      idx[j] = 0;
    }
  }

  double step = 0.0;
  for (std::size_t j = 0; j < n; ++j) step = std::max(step, (box.upper()[j] - box.lower()[j]) / denom);
  refine(P, box, xmin, pmin, step, +1.0);
  refine(P, box, xmax, pmax, step, -1.0);
  return {pmax, pmin, true};
}

PotentialOracle smoothed_potential(std::shared_ptr<const StructuredGameModel> game, const PotentialOracle& P,
                                   double eta) {
  if (!(eta > 0.0)) throw DomainError("smoothed_potential: eta must be positive");
  if (!game) throw std::invalid_argument("smoothed_potential: null game");
  PotentialOracle out;
  auto base = P.eval;
  out.eval = [game, base, eta](std::span<const double> x) {
    double v = base(x);
    for (std::size_t i = 0; i < game->players(); ++i) {
      const auto xi = x.subspan(game->partition().offset(i), 1);
      v += smoothed_private_cost(*game, i, xi[0], eta) - game->private_cost(i, xi);
    }
    return v;
  };
  return out;
}

}  // namespace nashsg
