#include "nashsg/sets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashsg/error.hpp"

namespace nashsg {

BoxSet::BoxSet(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw DimensionError("BoxSet: lower has " + std::to_string(lower_.size()) +
                         " entries, upper has " + std::to_string(upper_.size()));
  }
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
      throw DomainError("BoxSet: bounds must be finite");
    }
    if (lower_[j] > upper_[j]) {
      throw DomainError("BoxSet: lower > upper in coordinate " + std::to_string(j));
    }
  }
}

BoxSet BoxSet::uniform(std::size_t dim, double lo, double hi) {
  return BoxSet(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool BoxSet::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower_[j] || x[j] > upper_[j]) return false;
  }
  return true;
}

std::vector<double> BoxSet::midpoint() const {
  std::vector<double> m(dim());
  for (std::size_t j = 0; j < dim(); ++j) m[j] = 0.5 * (lower_[j] + upper_[j]);
  return m;
}

double BoxSet::max_sq_distance_from(std::span<const double> c) const {
  if (c.size() != dim()) throw DimensionError("BoxSet::max_sq_distance_from: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double d = std::max(std::abs(c[j] - lower_[j]), std::abs(upper_[j] - c[j]));
    s += d * d;
  }
  return s;
}

BoxSet BoxSet::inflated(double r) const {
  std::vector<double> lo = lower_, hi = upper_;
  for (auto& v : lo) v -= r;
  for (auto& v : hi) v += r;
  return BoxSet(std::move(lo), std::move(hi));
}

void project_in_place(std::span<double> x, const BoxSet& set) {
  if (x.size() != set.dim()) {
    throw DimensionError("project: point has " + std::to_string(x.size()) +
                         " coordinates, set has " + std::to_string(set.dim()));
  }
  const auto& lo = set.lower();
  const auto& hi = set.upper();
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lo[j], hi[j]);
}

std::vector<double> project(std::span<const double> x, const BoxSet& set) {
  std::vector<double> out(x.begin(), x.end());
  project_in_place(out, set);
  return out;
}

Partition::Partition(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  offsets_.reserve(dims_.size() + 1);
  offsets_.push_back(0);
  for (auto d : dims_) {
    if (d == 0) throw DomainError("Partition: player dimensions must be positive");
    offsets_.push_back(offsets_.back() + d);
  }
}

Partition Partition::scalar_players(std::size_t players) {
  return Partition(std::vector<std::size_t>(players, 1));
}

std::size_t Partition::max_dim() const {
  return dims_.empty() ? 0 : *std::max_element(dims_.begin(), dims_.end());
}

StrategyProfile::StrategyProfile(Partition partition, std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != partition_.total_dim()) {
    throw DimensionError("StrategyProfile: partition sums to " +
                         std::to_string(partition_.total_dim()) + " but " +
                         std::to_string(values_.size()) + " values were given");
  }
}

std::span<const double> StrategyProfile::player(std::size_t i) const {
  if (i >= partition_.players()) throw std::out_of_range("StrategyProfile: player index out of range");
  return std::span<const double>(values_).subspan(partition_.offset(i), partition_.dim(i));
}

std::span<double> StrategyProfile::player(std::size_t i) {
  if (i >= partition_.players()) throw std::out_of_range("StrategyProfile: player index out of range");
  return std::span<double>(values_).subspan(partition_.offset(i), partition_.dim(i));
}

std::vector<double> slice_player(const StrategyProfile& x, std::size_t i) {
  auto b = x.player(i);
  return {b.begin(), b.end()};
}

void write_player(StrategyProfile& x, std::size_t i, std::span<const double> block) {
  auto b = x.player(i);
  if (block.size() != b.size()) throw DimensionError("write_player: block length mismatch");
  std::copy(block.begin(), block.end(), b.begin());
}

ProductBox::ProductBox(Partition partition, std::vector<BoxSet> blocks)
    : partition_(std::move(partition)), blocks_(std::move(blocks)) {
  if (blocks_.size() != partition_.players()) {
    throw DimensionError("ProductBox: one box per player required");
  }
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].dim() != partition_.dim(i)) {
      throw DimensionError("ProductBox: box " + std::to_string(i) + " has wrong dimension");
    }
    lo.insert(lo.end(), blocks_[i].lower().begin(), blocks_[i].lower().end());
    hi.insert(hi.end(), blocks_[i].upper().begin(), blocks_[i].upper().end());
  }
  flat_ = BoxSet(std::move(lo), std::move(hi));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }
double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

}  // namespace nashsg
