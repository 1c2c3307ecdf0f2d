#include "nashsg/game.hpp"

#include <array>

#include "nashsg/error.hpp"

namespace nashsg {

namespace {

[[noreturn]] void missing(const std::string& model, const char* what) {
  throw MissingOracle(model + ": no analytic " + what + " oracle");
}

}  // namespace

void SmoothGameModel::exact_gradient(std::size_t, std::span<const double>, std::span<double>) const {
  missing(name(), "gradient");
}

double SmoothGameModel::objective(std::size_t, std::span<const double>) const {
  missing(name(), "objective");
}

double StructuredGameModel::private_cost(std::size_t, std::span<const double>) const {
  missing(name(), "private cost");
}

void StructuredGameModel::private_cost_gradient(std::size_t, std::span<const double>,
                                                std::span<double>) const {
  missing(name(), "private cost gradient");
}

const PiecewiseLinear1D* StructuredGameModel::private_cost_pwl(std::size_t) const { return nullptr; }

double StructuredGameModel::coupling_cost(std::size_t, std::span<const double>) const {
  missing(name(), "coupling cost");
}

void StructuredGameModel::coupling_gradient(std::size_t, std::span<const double>, std::span<double>) const {
  missing(name(), "coupling gradient");
}

double StructuredGameModel::objective(std::size_t i, std::span<const double> x) const {
  const auto& part = partition();
  return private_cost(i, x.subspan(part.offset(i), part.dim(i))) + coupling_cost(i, x);
}

void HierarchicalGameModel::exact_follower(std::size_t, std::span<const double>, std::span<double>) const {
  missing(name(), "follower");
}

double HierarchicalGameModel::reduced_private_cost(std::size_t, std::span<const double>) const {
  missing(name(), "reduced private cost");
}

void HierarchicalGameModel::reduced_private_cost_gradient(std::size_t, std::span<const double>,
                                                          std::span<double>) const {
  missing(name(), "reduced private cost gradient");
}

double HierarchicalGameModel::coupling_cost(std::size_t, std::span<const double>) const {
  missing(name(), "coupling cost");
}

void HierarchicalGameModel::coupling_gradient(std::size_t, std::span<const double>, std::span<double>) const {
  missing(name(), "coupling gradient");
}

void HierarchicalGameModel::follower_operator_mean(std::size_t, std::span<const double>,
                                                   std::span<const double>, std::span<double>) const {
  missing(name(), "follower operator mean");
}

ReducedHierarchicalGame::ReducedHierarchicalGame(std::shared_ptr<const HierarchicalGameModel> game)
    : game_(std::move(game)) {
  if (!game_) throw std::invalid_argument("ReducedHierarchicalGame: null game");
  if (!game_->has_exact_follower()) missing(game_->name(), "follower");
}

std::string ReducedHierarchicalGame::name() const { return game_->name() + "-reduced"; }

double ReducedHierarchicalGame::sampled_private_cost(std::size_t i, std::span<const double> xi_block,
                                                     NoiseSample xi) const {
  const std::size_t k = game_->follower_dim(i);
  if (k <= 8) {
    std::array<double, 8> y{};
    std::span<double> ys(y.data(), k);
    game_->exact_follower(i, xi_block, ys);
    return game_->sampled_private_cost(i, xi_block, ys, xi);
  }
  std::vector<double> y(k);
  game_->exact_follower(i, xi_block, y);
  return game_->sampled_private_cost(i, xi_block, y, xi);
}

NoiselessSmoothGame::NoiselessSmoothGame(std::shared_ptr<const SmoothGameModel> game)
    : game_(std::move(game)) {
  if (!game_) throw std::invalid_argument("NoiselessSmoothGame: null game");
  if (!game_->has_exact_gradient()) missing(game_->name(), "gradient");
}

std::vector<double> exact_pseudo_gradient(const SmoothGameModel& game, std::span<const double> x) {
  const auto& part = game.partition();
  if (x.size() != part.total_dim()) throw DimensionError("exact_pseudo_gradient: profile length mismatch");
  std::vector<double> F(x.size());
  for (std::size_t i = 0; i < part.players(); ++i) {
    game.exact_gradient(i, x, std::span<double>(F).subspan(part.offset(i), part.dim(i)));
  }
  return F;
}

std::vector<double> exact_pseudo_gradient(const StructuredGameModel& game, std::span<const double> x) {
  const auto& part = game.partition();
  if (x.size() != part.total_dim()) throw DimensionError("exact_pseudo_gradient: profile length mismatch");
  std::vector<double> F(x.size());
  std::vector<double> tmp(part.max_dim());
  for (std::size_t i = 0; i < part.players(); ++i) {
    auto Fi = std::span<double>(F).subspan(part.offset(i), part.dim(i));
    auto t = std::span<double>(tmp).first(part.dim(i));
    game.private_cost_gradient(i, x.subspan(part.offset(i), part.dim(i)), Fi);
    game.coupling_gradient(i, x, t);
    for (std::size_t j = 0; j < Fi.size(); ++j) Fi[j] += t[j];
  }
  return F;
}

}  // namespace nashsg
