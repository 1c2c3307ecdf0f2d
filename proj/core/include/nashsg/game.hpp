#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nashsg/piecewise_linear.hpp"
#include "nashsg/random.hpp"
#include "nashsg/sets.hpp"

namespace nashsg {

/// One realization of the problem noise xi. Both benchmark games are driven
/// by a single scalar; models with richer noise can pack it here.
using NoiseSample = double;

/// Pieces every game model shares: players, their blocks and their feasible boxes.
class GameBase {
 public:
  virtual ~GameBase() = default;

  virtual std::string name() const = 0;
  virtual const ProductBox& strategy_sets() const = 0;
  /// Draws one xi from its law, advancing `stream`.
  virtual NoiseSample draw_noise(RandomStream& stream) const = 0;

  const Partition& partition() const { return strategy_sets().partition(); }
  std::size_t players() const { return partition().players(); }
};

/// Stochastic game with smooth sampled objectives:
/// player i minimizes E[f~_i(x_i, x_{-i}, xi)] over X_i.
class SmoothGameModel : public GameBase {
 public:
  /// Writes grad_{x_i} f~_i(x, xi) into `out` (length n_i).
  virtual void sampled_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                std::span<double> out) const = 0;

  virtual bool has_exact_gradient() const { return false; }
  /// grad_{x_i} E[f~_i](x). Throws MissingOracle by default.
  virtual void exact_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const;
  /// E[f~_i](x). Throws MissingOracle by default.
  virtual double objective(std::size_t i, std::span<const double> x) const;
};

/// Game with a nonsmooth, Lipschitz private term and a smooth coupling term:
/// f_i(x) = E[h~_i(x_i, xi)] + E[m~_i(x_i, x_{-i}, xi)].
class StructuredGameModel : public GameBase {
 public:
  /// Zeroth-order oracle: h~_i(x_i, xi). Must accept points in X_i + eta B.
  virtual double sampled_private_cost(std::size_t i, std::span<const double> xi_block,
                                      NoiseSample xi) const = 0;
  /// First-order oracle: grad_{x_i} m~_i(x, xi).
  virtual void sampled_coupling_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                         std::span<double> out) const = 0;
  /// L_i with |h~_i(a, xi) - h~_i(b, xi)| <= L_i ||a - b|| for every xi.
  virtual double private_lipschitz(std::size_t i) const = 0;
  /// sigma_m^2: sup_x E||grad m~_i - grad m_i||^2 over i.
  virtual double coupling_variance_bound() const = 0;

  // Analytic expectations. Used by residuals and tests, never by the solvers.
  virtual bool has_analytic() const { return false; }
  /// h_i(x_i) = E[h~_i(x_i, xi)].
  virtual double private_cost(std::size_t i, std::span<const double> xi_block) const;
  /// grad h_i where it exists (off kinks).
  virtual void private_cost_gradient(std::size_t i, std::span<const double> xi_block,
                                     std::span<double> out) const;
  /// Exact piecewise-linear form of h_i when it has one (n_i = 1 only); null otherwise.
  virtual const PiecewiseLinear1D* private_cost_pwl(std::size_t i) const;
  /// m_i(x) = E[m~_i(x, xi)].
  virtual double coupling_cost(std::size_t i, std::span<const double> x) const;
  virtual void coupling_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const;
  /// Row-major Jacobian of x -> (grad_{x_i} m_i(x))_i when it is constant (quadratic coupling);
  /// empty when unknown.
  virtual std::vector<double> coupling_jacobian() const { return {}; }

  /// f_i = h_i + m_i.
  double objective(std::size_t i, std::span<const double> x) const;
};

/// Hierarchical game: the private term of leader i depends on the solution
/// y_i(x_i) of a strongly monotone stochastic VI over Y_i.
class HierarchicalGameModel : public GameBase {
 public:
  virtual const ProductBox& follower_sets() const = 0;

  /// h~_i(x_i, y_i, xi).
  virtual double sampled_private_cost(std::size_t i, std::span<const double> xi_block,
                                      std::span<const double> y_block, NoiseSample xi) const = 0;
  virtual void sampled_coupling_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                         std::span<double> out) const = 0;
  /// Lower-level operator F~_i(x_i, y_i, xi).
  virtual void sampled_follower_operator(std::size_t i, std::span<const double> xi_block,
                                         std::span<const double> y_block, NoiseSample xi,
                                         std::span<double> out) const = 0;

  /// mu_i: strong monotonicity modulus of E[F~_i(x_i, ., xi)].
  virtual double strong_monotonicity(std::size_t i) const = 0;
  /// L_i of the composite x_i -> h~_i(x_i, y_i(x_i), xi) over X_i.
  virtual double private_lipschitz(std::size_t i) const = 0;
  /// L^y_i of y_i -> h~_i(x_i, y_i, xi) over Y_i, uniform over x_i in X_i + B (eta <= 1).
  virtual double follower_lipschitz(std::size_t i) const = 0;
  /// c_{F_i}: sup ||E F~_i|| over X_i x Y_i.
  virtual double follower_operator_bound(std::size_t i) const = 0;
  /// v_i^2: sup of the conditional variance of F~_i.
  virtual double follower_noise_bound(std::size_t i) const = 0;
  virtual double coupling_variance_bound() const = 0;

  // Analytic pieces (tests and residuals only).
  virtual bool has_exact_follower() const { return false; }
  virtual void exact_follower(std::size_t i, std::span<const double> xi_block, std::span<double> y_out) const;
  /// h_i(x_i) = E[h~_i(x_i, y_i(x_i), xi)] with the exact follower.
  virtual double reduced_private_cost(std::size_t i, std::span<const double> xi_block) const;
  /// Total derivative of reduced_private_cost, implicit-function term included.
  virtual void reduced_private_cost_gradient(std::size_t i, std::span<const double> xi_block,
                                             std::span<double> out) const;
  virtual double coupling_cost(std::size_t i, std::span<const double> x) const;
  virtual void coupling_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const;
  virtual std::vector<double> coupling_jacobian() const { return {}; }
  /// E[F~_i(x_i, y_i, xi)].
  virtual void follower_operator_mean(std::size_t i, std::span<const double> xi_block,
                                      std::span<const double> y_block, std::span<double> out) const;

  std::size_t follower_dim(std::size_t i) const { return follower_sets().partition().dim(i); }
};

/// The single-level game obtained by plugging the exact follower into a
/// hierarchical game. Solvers run on it as the zero-bias idealization.
class ReducedHierarchicalGame final : public StructuredGameModel {
 public:
  explicit ReducedHierarchicalGame(std::shared_ptr<const HierarchicalGameModel> game);

  std::string name() const override;
  const ProductBox& strategy_sets() const override { return game_->strategy_sets(); }
  NoiseSample draw_noise(RandomStream& s) const override { return game_->draw_noise(s); }

  double sampled_private_cost(std::size_t i, std::span<const double> xi_block, NoiseSample xi) const override;
  void sampled_coupling_gradient(std::size_t i, std::span<const double> x, NoiseSample xi,
                                 std::span<double> out) const override {
    game_->sampled_coupling_gradient(i, x, xi, out);
  }
  double private_lipschitz(std::size_t i) const override { return game_->private_lipschitz(i); }
  double coupling_variance_bound() const override { return game_->coupling_variance_bound(); }

  bool has_analytic() const override { return true; }
  double private_cost(std::size_t i, std::span<const double> xi_block) const override {
    return game_->reduced_private_cost(i, xi_block);
  }
  void private_cost_gradient(std::size_t i, std::span<const double> xi_block,
                             std::span<double> out) const override {
    game_->reduced_private_cost_gradient(i, xi_block, out);
  }
  double coupling_cost(std::size_t i, std::span<const double> x) const override {
    return game_->coupling_cost(i, x);
  }
  void coupling_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const override {
    game_->coupling_gradient(i, x, out);
  }
  std::vector<double> coupling_jacobian() const override { return game_->coupling_jacobian(); }

  const HierarchicalGameModel& base() const { return *game_; }

 private:
  std::shared_ptr<const HierarchicalGameModel> game_;
};

/// Wraps a smooth game so its sampled oracle returns the exact expectation (sigma = 0).
class NoiselessSmoothGame final : public SmoothGameModel {
 public:
  explicit NoiselessSmoothGame(std::shared_ptr<const SmoothGameModel> game);

  std::string name() const override { return game_->name() + "-noiseless"; }
  const ProductBox& strategy_sets() const override { return game_->strategy_sets(); }
  NoiseSample draw_noise(RandomStream& s) const override { return game_->draw_noise(s); }
  void sampled_gradient(std::size_t i, std::span<const double> x, NoiseSample,
                        std::span<double> out) const override {
    game_->exact_gradient(i, x, out);
  }
  bool has_exact_gradient() const override { return true; }
  void exact_gradient(std::size_t i, std::span<const double> x, std::span<double> out) const override {
    game_->exact_gradient(i, x, out);
  }
  double objective(std::size_t i, std::span<const double> x) const override {
    return game_->objective(i, x);
  }

 private:
  std::shared_ptr<const SmoothGameModel> game_;
};

/// P_max / P_min over X. `estimated` marks grid-plus-refinement values
/// (as opposed to values known in closed form).
struct PotentialBounds {
  double max = 0.0;
  double min = 0.0;
  bool estimated = true;
};

/// Potential P over X, evaluated from the analytic expectations.
struct PotentialOracle {
  std::function<double(std::span<const double>)> eval;
  std::optional<PotentialBounds> bounds;

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// Stacked pseudo-gradient F(x) = (grad_{x_i} f_i(x))_i of a smooth game (exact oracle).
std::vector<double> exact_pseudo_gradient(const SmoothGameModel& game, std::span<const double> x);
/// Stacked exact gradient of a structured game at a point off the kinks of h.
std::vector<double> exact_pseudo_gradient(const StructuredGameModel& game, std::span<const double> x);

}  // namespace nashsg
