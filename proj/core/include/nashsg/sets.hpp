#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nashsg {

/// Axis-aligned box [lower, upper] in R^n.
class BoxSet {
 public:
  BoxSet() = default;
  BoxSet(std::vector<double> lower, std::vector<double> upper);

  /// Same interval [lo, hi] in each of `dim` coordinates.
  static BoxSet uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  bool contains(std::span<const double> x) const;
  std::vector<double> midpoint() const;
  /// sup over y in the box of ||c - y||^2.
  double max_sq_distance_from(std::span<const double> c) const;
  /// Box grown by `r` on every face.
  BoxSet inflated(double r) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Euclidean projection onto a box: a componentwise clamp.
std::vector<double> project(std::span<const double> x, const BoxSet& set);
void project_in_place(std::span<double> x, const BoxSet& set);

/// Player-major block partition of a concatenated decision vector.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::size_t> dims);

  /// N players with n_i = 1.
  static Partition scalar_players(std::size_t players);

  std::size_t players() const { return dims_.size(); }
  std::size_t total_dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  std::size_t max_dim() const;
  const std::vector<std::size_t>& dims() const { return dims_; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;  // size players()+1
};

/// Decision vector x = (x_1, ..., x_N) together with its partition.
class StrategyProfile {
 public:
  StrategyProfile(Partition partition, std::vector<double> values);

  const Partition& partition() const { return partition_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Block of player i (0-based).
  std::span<const double> player(std::size_t i) const;
  std::span<double> player(std::size_t i);

 private:
  Partition partition_;
  std::vector<double> values_;
};

/// Copy of block i (0-based) of a profile.
std::vector<double> slice_player(const StrategyProfile& x, std::size_t i);
/// Overwrite block i; every other block is left untouched.
void write_player(StrategyProfile& x, std::size_t i, std::span<const double> block);

/// Product of per-player boxes, projected block by block.
class ProductBox {
 public:
  ProductBox() = default;
  ProductBox(Partition partition, std::vector<BoxSet> blocks);

  const Partition& partition() const { return partition_; }
  const BoxSet& block(std::size_t i) const { return blocks_.at(i); }
  /// Flattened box over the full profile.
  const BoxSet& flat() const { return flat_; }

 private:
  Partition partition_;
  std::vector<BoxSet> blocks_;
  BoxSet flat_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm(std::span<const double> a);

}  // namespace nashsg
