#include "nashsg/cournot.hpp"

#include <algorithm>
#include <cmath>

#include "nashsg/error.hpp"

namespace nashsg {

namespace {

double uniform_mean(double lo, double hi) { return 0.5 * (lo + hi); }
double uniform_var(double lo, double hi) { return (hi - lo) * (hi - lo) / 12.0; }

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

/// c * (I + e e^T), row-major.
std::vector<double> rank_one_jacobian(std::size_t n, double c) {
  std::vector<double> J(n * n, c);
  for (std::size_t i = 0; i < n; ++i) J[i * n + i] = 2.0 * c;
  return J;
}

/// -abar sum x + bbar sum x^2 + bbar sum_{i<j} x_i x_j.
double market_potential(std::span<const double> x, double abar, double bbar) {
  const double s = sum(x);
  return -abar * s + 0.5 * bbar * (norm2(x) + s * s);
}

class CournotNonsmooth final : public StructuredGameModel {
 public:
  explicit CournotNonsmooth(const CournotParams& p) : p_(p) {
    if (p.players == 0) throw DomainError("cournot: need at least one player");
    if (!(p.noise_lo < p.noise_hi)) throw DomainError("cournot: empty noise interval");
    sets_ = ProductBox(Partition::scalar_players(p.players),
                       std::vector<BoxSet>(p.players, BoxSet::uniform(1, 0.0, p.upper)));
    const double mean = uniform_mean(p.noise_lo, p.noise_hi);
    const PiecewiseLinear1D g = p.linear_cost ? PiecewiseLinear1D({}, {1.0})
                                              : PiecewiseLinear1D::min_of_lines(1.0, 0.0, 0.5, 2.0);
    for (std::size_t i = 0; i < p.players; ++i) {
      g_.push_back(g.scaled(cost_coef(i)));
      h_.push_back(g.scaled(cost_coef(i) * mean));
    }
    abar_ = p.a_coef * mean;
    bbar_ = p.b_coef * mean;
  }

  std::string name() const override { return p_.linear_cost ? "cournot-linear" : "cournot"; }
  const ProductBox& strategy_sets() const override { return sets_; }
  NoiseSample draw_noise(RandomStream& s) const override { return sample_uniform(s, p_.noise_lo, p_.noise_hi); }

  double sampled_private_cost(std::size_t i, std::span<const double> xb, NoiseSample xi) const override {
    return xi * g_[i](xb[0]);
  }
  void sampled_coupling_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                 std::span<double> out) const override {
    out[0] = -p_.a_coef * xi + p_.b_coef * xi * (sum(x) + x[i]);
  }
  double private_lipschitz(std::size_t i) const override {
    return std::max(std::abs(p_.noise_lo), std::abs(p_.noise_hi)) * g_[i].lipschitz();
  }
  double coupling_variance_bound() const override {
    // grad m~_i = xi (b s - a) with s = xbar + x_i in [0, (N+1) upper].
    const double s_hi = static_cast<double>(p_.players + 1) * p_.upper;
    const double c = std::max(std::abs(p_.a_coef), std::abs(p_.b_coef * s_hi - p_.a_coef));
    return uniform_var(p_.noise_lo, p_.noise_hi) * c * c;
  }

  bool has_analytic() const override { return true; }
  double private_cost(std::size_t i, std::span<const double> xb) const override { return h_[i](xb[0]); }
  void private_cost_gradient(std::size_t i, std::span<const double> xb, std::span<double> out) const override {
    out[0] = h_[i].slope_at(xb[0]);
  }
  const PiecewiseLinear1D* private_cost_pwl(std::size_t i) const override { return &h_.at(i); }
  double coupling_cost(std::size_t i, std::span<const double> x) const override {
    return (-abar_ + bbar_ * sum(x)) * x[i];
  }
  void coupling_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const override {
    out[0] = -abar_ + bbar_ * (sum(x) + x[i]);
  }
  std::vector<double> coupling_jacobian() const override { return rank_one_jacobian(p_.players, bbar_); }

 private:
  double cost_coef(std::size_t i) const { return p_.cost_base + static_cast<double>(i + 1) * p_.cost_step; }

  CournotParams p_;
  ProductBox sets_;
  std::vector<PiecewiseLinear1D> g_;  // c~_i(xi)/xi * g
  std::vector<PiecewiseLinear1D> h_;  // E[c~_i] * g
  double abar_ = 0.0;
  double bbar_ = 0.0;
};

class CournotSmooth final : public SmoothGameModel {
 public:
  explicit CournotSmooth(const CournotParams& p) : inner_(p) {}

  std::string name() const override { return "cournot-smooth"; }
  const ProductBox& strategy_sets() const override { return inner_.strategy_sets(); }
  NoiseSample draw_noise(RandomStream& s) const override { return inner_.draw_noise(s); }

  void sampled_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                        std::span<double> out) const override {
    inner_.sampled_coupling_gradient(i, x, xi, out);
    // linear cost: h~_i = c~_i(xi) x_i
    out[0] += inner_.sampled_private_cost(i, std::span<const double>(&one_, 1), xi);
  }
  bool has_exact_gradient() const override { return true; }
  void exact_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const override {
    inner_.coupling_gradient(i, x, out);
    out[0] += inner_.private_cost(i, std::span<const double>(&one_, 1));
  }
  double objective(std::size_t i, std::span<const double> x) const override { return inner_.objective(i, x); }

 private:
  CournotNonsmooth inner_;
  double one_ = 1.0;
};

class CournotHierarchical final : public HierarchicalGameModel {
 public:
  explicit CournotHierarchical(const HierarchicalCournotParams& p) : p_(p) {
    if (p.players == 0) throw DomainError("cournot: need at least one player");
    if (!(p.noise_lo < p.noise_hi)) throw DomainError("cournot: empty noise interval");
    const auto part = Partition::scalar_players(p.players);
    sets_ = ProductBox(part, std::vector<BoxSet>(p.players, BoxSet::uniform(1, 0.0, p.upper)));
    fsets_ = ProductBox(part, std::vector<BoxSet>(p.players, BoxSet::uniform(1, 0.0, p.follower_upper)));
    const double m = uniform_mean(p.noise_lo, p.noise_hi);
    abar_ = p.a_base + p.a_noise * m;
    bbar_ = p.b_base + p.b_noise * m;
    cbar_ = p.follower_cost_base + p.follower_cost_noise * m;
    lbar_ = p.leader_cost_base + p.leader_cost_noise * m;
    if (!(bbar_ > 0.0)) throw DomainError("cournot: follower problem is not strongly monotone");
    L_ = composite_lipschitz();
  }

  std::string name() const override { return "cournot-hier"; }
  const ProductBox& strategy_sets() const override { return sets_; }
  const ProductBox& follower_sets() const override { return fsets_; }
  NoiseSample draw_noise(RandomStream& s) const override { return sample_uniform(s, p_.noise_lo, p_.noise_hi); }

  double sampled_private_cost(std::size_t, std::span<const double> xb, std::span<const double> yb,
                              NoiseSample xi) const override {
    if (!(xb[0] > -1.0)) throw DomainError("cournot: leader cost needs x > -1");
    return (p_.leader_cost_base + p_.leader_cost_noise * xi) * std::log1p(xb[0]) + b(xi) * xb[0] * yb[0];
  }
  void sampled_coupling_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                 std::span<double> out) const override {
    out[0] = -a(xi) + b(xi) * (sum(x) + x[i]);
  }
  void sampled_follower_operator(std::size_t, std::span<const double> xb, std::span<const double> yb,
                                 NoiseSample xi, std::span<double> out) const override {
    out[0] = (p_.follower_cost_base + p_.follower_cost_noise * xi) - a(xi) + b(xi) * (xb[0] + 2.0 * yb[0]);
  }

  double strong_monotonicity(std::size_t) const override { return 2.0 * bbar_; }
  double private_lipschitz(std::size_t) const override { return L_; }
  double follower_lipschitz(std::size_t) const override {
    return max_abs_b() * std::max(1.0, p_.upper + 1.0);
  }
  double follower_operator_bound(std::size_t) const override {
    double c = 0.0;
    for (double x : {-1.0, p_.upper + 1.0})
      for (double y : {0.0, p_.follower_upper}) c = std::max(c, std::abs(cbar_ - abar_ + bbar_ * (x + 2.0 * y)));
    return c;
  }
  double follower_noise_bound(std::size_t) const override {
    double c = 0.0;
    for (double x : {-1.0, p_.upper + 1.0})
      for (double y : {0.0, p_.follower_upper})
        c = std::max(c, std::abs(p_.follower_cost_noise - p_.a_noise + p_.b_noise * (x + 2.0 * y)));
    return uniform_var(p_.noise_lo, p_.noise_hi) * c * c;
  }
  double coupling_variance_bound() const override {
    const double s_hi = static_cast<double>(p_.players + 1) * p_.upper;
    const double c = std::max(std::abs(p_.a_noise), std::abs(p_.b_noise * s_hi - p_.a_noise));
    return uniform_var(p_.noise_lo, p_.noise_hi) * c * c;
  }

  bool has_exact_follower() const override { return true; }
  void exact_follower(std::size_t, std::span<const double> xb, std::span<double> y) const override {
    y[0] = follower(xb[0]);
  }
  double reduced_private_cost(std::size_t, std::span<const double> xb) const override {
    const double x = xb[0];
    return lbar_ * std::log1p(x) + bbar_ * x * follower(x);
  }
  void reduced_private_cost_gradient(std::size_t, std::span<const double> xb,
                                     std::span<double> out) const override {
    out[0] = reduced_slope(xb[0], lbar_, bbar_);
  }
  double coupling_cost(std::size_t i, std::span<const double> x) const override {
    return (-abar_ + bbar_ * sum(x)) * x[i];
  }
  void coupling_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const override {
    out[0] = -abar_ + bbar_ * (sum(x) + x[i]);
  }
  std::vector<double> coupling_jacobian() const override { return rank_one_jacobian(p_.players, bbar_); }
  void follower_operator_mean(std::size_t, std::span<const double> xb, std::span<const double> yb,
                              std::span<double> out) const override {
    out[0] = cbar_ - abar_ + bbar_ * (xb[0] + 2.0 * yb[0]);
  }

 private:
  double a(double xi) const { return p_.a_base + p_.a_noise * xi; }
  double b(double xi) const { return p_.b_base + p_.b_noise * xi; }
  double max_abs_b() const { return std::max(std::abs(b(p_.noise_lo)), std::abs(b(p_.noise_hi))); }

  double unclamped(double x) const { return (abar_ - cbar_ - bbar_ * x) / (2.0 * bbar_); }
  double follower(double x) const { return std::clamp(unclamped(x), 0.0, p_.follower_upper); }

  /// d/dx [lc log(1+x) + bc x y(x)] (right derivative where y has a kink).
  double reduced_slope(double x, double lc, double bc) const {
    const double u = unclamped(x);
    const double dy = (u > 0.0 && u < p_.follower_upper) ? -0.5 : 0.0;
    return lc / (1.0 + x) + bc * (follower(x) + x * dy);
  }

  /// Sup over x in X and xi at the noise endpoints of the composite slope.
  double composite_lipschitz() const {
    constexpr int kGrid = 4000;
    double L = 0.0;
    for (double xi : {p_.noise_lo, p_.noise_hi}) {
      const double lc = p_.leader_cost_base + p_.leader_cost_noise * xi;
      for (int k = 0; k <= kGrid; ++k) {
        const double x = p_.upper * k / kGrid;
        L = std::max(L, std::abs(reduced_slope(x, lc, b(xi))));
      }
    }
    return L;
  }

  HierarchicalCournotParams p_;
  ProductBox sets_;
  ProductBox fsets_;
  double abar_ = 0.0, bbar_ = 0.0, cbar_ = 0.0, lbar_ = 0.0;
  double L_ = 0.0;
};

CournotParams smooth_interior_params() {
  CournotParams p;
  p.a_coef = 8.0;
  p.b_coef = 0.1;
  p.linear_cost = true;
  return p;
}

}  // namespace

std::shared_ptr<const StructuredGameModel> cournot_nonsmooth_model(const CournotParams& p) {
  return std::make_shared<CournotNonsmooth>(p);
}

PotentialOracle cournot_potential(const CournotParams& p) {
  auto model = std::make_shared<CournotNonsmooth>(p);
  const double mean = uniform_mean(p.noise_lo, p.noise_hi);
  const double abar = p.a_coef * mean;
  const double bbar = p.b_coef * mean;
  PotentialOracle P;
  P.eval = [model, abar, bbar](std::span<const double> x) {
    if (x.size() != model->partition().total_dim()) throw DimensionError("potential: profile length mismatch");
    double v = market_potential(x, abar, bbar);
    for (std::size_t i = 0; i < x.size(); ++i) v += model->private_cost(i, x.subspan(i, 1));
    return v;
  };
  return P;
}

std::shared_ptr<const SmoothGameModel> cournot_smooth_model(CournotParams p) {
  p.linear_cost = true;
  return std::make_shared<CournotSmooth>(p);
}

std::shared_ptr<const HierarchicalGameModel> cournot_hierarchical_model(const HierarchicalCournotParams& p) {
  return std::make_shared<CournotHierarchical>(p);
}

PotentialOracle hierarchical_potential(const HierarchicalCournotParams& p) {
  auto model = std::make_shared<CournotHierarchical>(p);
  const double m = uniform_mean(p.noise_lo, p.noise_hi);
  const double abar = p.a_base + p.a_noise * m;
  const double bbar = p.b_base + p.b_noise * m;
  PotentialOracle P;
  P.eval = [model, abar, bbar](std::span<const double> x) {
    if (x.size() != model->partition().total_dim()) throw DimensionError("potential: profile length mismatch");
    double v = market_potential(x, abar, bbar);
    for (std::size_t i = 0; i < x.size(); ++i) v += model->reduced_private_cost(i, x.subspan(i, 1));
    return v;
  };
  return P;
}

GameBundle cournot_nonsmooth() {
  const CournotParams p;
  GameBundle b;
  b.name = "cournot6";
  b.structured = cournot_nonsmooth_model(p);
  b.potential = cournot_potential(p);
  b.default_x0.assign(p.players, p.upper);
  return b;
}

GameBundle cournot_smooth() {
  const CournotParams p = smooth_interior_params();
  GameBundle b;
  b.name = "cournot6-smooth";
  b.smooth = cournot_smooth_model(p);
  b.potential = cournot_potential(p);
  b.default_x0.assign(p.players, p.upper);
  return b;
}

GameBundle cournot_hierarchical() {
  const HierarchicalCournotParams p;
  GameBundle b;
  b.name = "hier4";
  b.hierarchical = cournot_hierarchical_model(p);
  b.structured = std::make_shared<ReducedHierarchicalGame>(b.hierarchical);
  b.potential = hierarchical_potential(p);
  b.default_x0.assign(p.players, p.upper - 1.0);
  return b;
}

std::vector<std::string> known_games() { return {"cournot6", "cournot6-smooth", "hier4"}; }

GameBundle make_game(const std::string& name) {
  if (name == "cournot6") return cournot_nonsmooth();
  if (name == "cournot6-smooth") return cournot_smooth();
  if (name == "hier4") return cournot_hierarchical();
  std::string known;
  for (const auto& g : known_games()) known += (known.empty() ? "" : ", ") + g;
  throw ConfigError("unknown game '" + name + "' (known: " + known + ")");
}

}  // namespace nashsg
