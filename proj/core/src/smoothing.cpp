#include "nashsg/smoothing.hpp"

#include <array>
#include <cmath>

#include "nashsg/error.hpp"

namespace nashsg {

TwoPointEstimate two_point_gradient(const BlockFunction& h, std::span<const double> x, double eta,
                                    RandomStream& dir_stream) {
  if (!(eta > 0.0)) throw DomainError("two_point_gradient: eta must be positive");
  const std::size_t n = x.size();
  TwoPointEstimate e;
  e.direction = sample_sphere(dir_stream, n, eta);
  std::vector<double> p(n), m(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = x[j] + e.direction[j];
    m[j] = x[j] - e.direction[j];
  }
  e.f_plus = h(p);
  e.f_minus = h(m);
  // ||v|| = eta, so v / ||v|| = v / eta.
  const double c = static_cast<double>(n) / (2.0 * eta) * (e.f_plus - e.f_minus) / eta;
  e.value.resize(n);
  for (std::size_t j = 0; j < n; ++j) e.value[j] = c * e.direction[j];
  return e;
}

TwoPointEstimate two_point_gradient(const StructuredGameModel& game, std::size_t i,
                                    std::span<const double> x_i, double eta, NoiseSample xi,
                                    RandomStream& dir_stream) {
  if (x_i.size() != game.partition().dim(i)) throw DimensionError("two_point_gradient: block length mismatch");
  return two_point_gradient([&](std::span<const double> z) { return game.sampled_private_cost(i, z, xi); }, x_i,
                            eta, dir_stream);
}

Smoothed1D::Smoothed1D(PiecewiseLinear1D f, double eta) : f_(std::move(f)), eta_(eta) {
  if (!(eta > 0.0)) throw DomainError("smooth_1d_closed_form: eta must be positive");
}

double Smoothed1D::value(double x) const { return f_.integral(x - eta_, x + eta_) / (2.0 * eta_); }

double Smoothed1D::grad(double x) const { return (f_(x + eta_) - f_(x - eta_)) / (2.0 * eta_); }

Smoothed1D smooth_1d_closed_form(const PiecewiseLinear1D& f, double eta) { return Smoothed1D(f, eta); }

namespace {

void require_scalar(const StructuredGameModel& game, std::size_t i) {
  if (game.partition().dim(i) != 1) throw MissingOracle(game.name() + ": closed-form smoothing needs n_i = 1");
  if (!game.has_analytic()) throw MissingOracle(game.name() + ": no analytic private cost");
}

}  // namespace

double smoothed_private_gradient(const StructuredGameModel& game, std::size_t i, double x_i, double eta) {
  if (!(eta > 0.0)) throw DomainError("smoothed_private_gradient: eta must be positive");
  require_scalar(game, i);
  if (const auto* f = game.private_cost_pwl(i)) return ((*f)(x_i + eta) - (*f)(x_i - eta)) / (2.0 * eta);
  const double p = x_i + eta, m = x_i - eta;
  return (game.private_cost(i, std::span<const double>(&p, 1)) -
          game.private_cost(i, std::span<const double>(&m, 1))) /
         (2.0 * eta);
}

double smoothed_private_cost(const StructuredGameModel& game, std::size_t i, double x_i, double eta) {
  if (!(eta > 0.0)) throw DomainError("smoothed_private_cost: eta must be positive");
  require_scalar(game, i);
  if (const auto* f = game.private_cost_pwl(i)) return f->integral(x_i - eta, x_i + eta) / (2.0 * eta);
  const auto h = [&](double z) { return game.private_cost(i, std::span<const double>(&z, 1)); };
  return integrate(h, x_i - eta, x_i + eta) / (2.0 * eta);
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  static constexpr std::array<double, 4> kNode = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                   0.9602898564975363};
  static constexpr std::array<double, 4> kWeight = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                     0.1012285362903763};
  if (panels < 1) throw DomainError("integrate: need at least one panel");
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    const double r = 0.5 * h;
    double s = 0.0;
    for (std::size_t k = 0; k < kNode.size(); ++k) s += kWeight[k] * (f(c - r * kNode[k]) + f(c + r * kNode[k]));
    total += r * s;
  }
  return total;
}

}  // namespace nashsg
