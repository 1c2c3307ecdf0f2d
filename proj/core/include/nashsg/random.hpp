#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nashsg {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudorandom bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// What a stream is used for. Distinct purposes never share draws.
enum class Purpose : std::uint8_t {
  problem_noise = 0,    // xi realizations
  direction = 1,        // smoothing directions v
  lower_plus = 2,       // follower SA noise at x + v
  lower_minus = 3,      // follower SA noise at x - v
  output_index = 4,     // R ~ P_R
  estimation = 5,       // auxiliary Monte Carlo (sigma estimates, residual MC)
  test = 15,
};

/// Bit-packed stream identifier: path (16 bits) | player (12) | purpose (4) | iteration (32).
/// The packing is injective, so two different tuples can never alias.
struct StreamKey {
  std::uint32_t path = 0;
  std::uint32_t player = 0;
  Purpose purpose = Purpose::problem_noise;
  std::uint64_t iteration = 0;

  std::uint64_t pack() const;
};

/// Single-owner random source keyed by (seed, stream_id).
///
/// Draw j of a stream is a pure function of (seed, stream_id, j), so streams
/// can be created in any order and on any thread without changing results.
/// Each stream has 2^64 blocks of 128 bits.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);
  RandomStream(std::uint64_t seed, const StreamKey& key) : RandomStream(seed, key.pack()) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal (Box-Muller, second variate cached).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Uniform draw on [lo, hi). Throws DomainError unless lo < hi.
double sample_uniform(RandomStream& stream, double lo, double hi);

/// Uniform point on the sphere of radius `radius` in R^n (normalized Gaussian).
/// For n = 1 this is +radius or -radius with probability 1/2 each.
std::vector<double> sample_sphere(RandomStream& stream, std::size_t n, double radius);
void sample_sphere(RandomStream& stream, double radius, std::span<double> out);

/// Probability mass function P_R over iteration indices {1, ..., T}.
class OutputDistribution {
 public:
  explicit OutputDistribution(std::vector<double> weights);

  static OutputDistribution uniform(std::size_t T);
  /// P_R(k) proportional to gamma_k - L gamma_k^2 (requires every gamma_k <= 1/L,
  /// at least one strictly below).
  static OutputDistribution from_steps(std::span<const double> gammas, double L);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  std::vector<double> cdf_;
  friend std::size_t sample_output_index(RandomStream&, const OutputDistribution&);
};

/// Draws R in {1, ..., T} with the given mass function.
std::size_t sample_output_index(RandomStream& stream, const OutputDistribution& dist);

}  // namespace nashsg
