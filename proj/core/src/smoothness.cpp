#include "nashsg/smoothness.hpp"

#include <algorithm>
#include <cmath>

#include "nashsg/error.hpp"
#include "nashsg/residuals.hpp"

namespace nashsg {

namespace {

constexpr int kPowerIters = 200;

/// Power iteration for the top eigenvalue of a symmetric PSD operator.
double top_eigenvalue(const std::function<std::vector<double>(std::span<const double>)>& A, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.1 * static_cast<double>(j);  // generic start
  double lambda = 0.0;
  for (int it = 0; it < kPowerIters; ++it) {
    const double nv = norm(v);
    if (nv == 0.0) return 0.0;
    for (auto& c : v) c /= nv;
    auto w = A(v);
    lambda = dot(v, w);
    v = std::move(w);
  }
  return lambda;
}

}  // namespace

double spectral_norm(std::span<const double> J, std::size_t n) {
  if (J.size() != n * n) throw DimensionError("spectral_norm: expected an n x n matrix");
  const auto JtJ = [&](std::span<const double> v) {
    std::vector<double> u(n, 0.0), w(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) u[r] += J[r * n + c] * v[c];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) w[c] += J[r * n + c] * u[r];
    return w;
  };
  return std::sqrt(std::max(0.0, top_eigenvalue(JtJ, n)));
}

double jacobian_norm_fd(const std::function<std::vector<double>(std::span<const double>)>& F,
                        std::span<const double> x, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("jacobian_norm_fd: fd_step must be positive");
  const std::size_t n = x.size();
  const auto Jv = [&](std::span<const double> v) {
    std::vector<double> p(x.begin(), x.end()), m(x.begin(), x.end());
    for (std::size_t j = 0; j < n; ++j) {
      p[j] += fd_step * v[j];
      m[j] -= fd_step * v[j];
    }
    const auto Fp = F(p), Fm = F(m);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = (Fp[j] - Fm[j]) / (2.0 * fd_step);
    return out;
  };
  // J^T J v with J^T u formed column by column from J e_c.
  std::vector<double> Jfull(n * n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const auto col = Jv(e);
    for (std::size_t r = 0; r < n; ++r) Jfull[r * n + c] = col[r];
    e[c] = 0.0;
  }
  return spectral_norm(Jfull, n);
}

double analytic_smoothness(const StructuredGameModel& game, double eta) {
  if (!(eta > 0.0)) throw DomainError("analytic_smoothness: eta must be positive");
  const auto& part = game.partition();
  const auto J = game.coupling_jacobian();
  if (J.empty()) throw MissingOracle(game.name() + ": coupling Jacobian unknown");
  double Lmax = 0.0;
  for (std::size_t i = 0; i < part.players(); ++i) Lmax = std::max(Lmax, game.private_lipschitz(i));
  const double L1m = spectral_norm(J, part.total_dim());
  return L1m + Lmax * std::sqrt(static_cast<double>(part.max_dim())) *
                   std::sqrt(static_cast<double>(part.players())) / eta;
}

double potential_radius(const PotentialBounds& bounds, double L) {
  if (!(L > 0.0)) throw DomainError("potential_radius: L must be positive");
  if (bounds.max < bounds.min) throw DomainError("potential_radius: P_max < P_min");
  return std::sqrt((bounds.max - bounds.min) / L);
}

SmoothnessEstimate estimate_smoothness(const StructuredGameModel& game, double eta, SmoothnessMethod method,
                                       const std::vector<std::vector<double>>& probe_points, double fd_step,
                                       const PotentialBounds& bounds) {
  SmoothnessEstimate est;
  est.method = method;
  est.bounds = bounds;
  const auto J = game.coupling_jacobian();
  if (!J.empty()) est.L1_m = spectral_norm(J, game.partition().total_dim());
  if (method == SmoothnessMethod::analytic) {
    est.L = analytic_smoothness(game, eta);
  } else {
    if (probe_points.empty()) throw DomainError("estimate_smoothness: need probe points");
    if (!(fd_step > 0.0)) throw DomainError("estimate_smoothness: fd_step must be positive");
    const auto& box = game.strategy_sets().flat();
    double best = 0.0;
    const auto ratio = [&](std::span<const double> a, std::span<const double> b) {
      std::vector<double> d(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
      const double dist = norm(d);
      if (dist == 0.0) throw DomainError("estimate_smoothness: degenerate probe pair");
      const auto Fa = smoothed_pseudo_gradient(game, a, eta);
      const auto Fb = smoothed_pseudo_gradient(game, b, eta);
      for (std::size_t j = 0; j < a.size(); ++j) d[j] = Fa[j] - Fb[j];
      best = std::max(best, norm(d) / dist);
    };
    for (std::size_t p = 0; p < probe_points.size(); ++p) {
      const auto& a = probe_points[p];
      if (!box.contains(a)) throw DomainError("estimate_smoothness: probe outside X");
      if (p + 1 < probe_points.size()) ratio(a, probe_points[p + 1]);
      for (std::size_t j = 0; j < a.size(); ++j) {
        auto b = a;
        b[j] += fd_step;
        ratio(a, b);
      }
    }
    est.L = 2.0 * best;
  }
  if (!(est.L > 0.0)) throw DomainError("estimate_smoothness: nonpositive L");
  est.D = potential_radius(bounds, est.L);
  return est;
}

}  // namespace nashsg
