#include "nashsg/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "nashsg/error.hpp"

namespace nashsg {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t StreamKey::pack() const {
  if (path >= (1u << 16)) throw DomainError("StreamKey: path index exceeds 16 bits");
  if (player >= (1u << 12)) throw DomainError("StreamKey: player index exceeds 12 bits");
  if (iteration >= (std::uint64_t{1} << 32)) throw DomainError("StreamKey: iteration exceeds 32 bits");
  return (static_cast<std::uint64_t>(path) << 48) | (static_cast<std::uint64_t>(player) << 36) |
         (static_cast<std::uint64_t>(purpose) << 32) | iteration;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void RandomStream::refill() {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = philox4x32_10(ctr, key);
  ++block_;
  used_ = 0;
}

RandomStream::result_type RandomStream::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t v =
      (static_cast<std::uint64_t>(buffer_[used_ + 1]) << 32) | buffer_[used_];
  used_ += 2;
  return v;
}

double RandomStream::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

double sample_uniform(RandomStream& stream, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("sample_uniform: need lo < hi");
  return lo + (hi - lo) * stream.uniform01();
}

void sample_sphere(RandomStream& stream, double radius, std::span<double> out) {
  if (!(radius > 0.0)) throw DomainError("sample_sphere: radius must be positive");
  if (out.empty()) throw DomainError("sample_sphere: dimension must be at least 1");
  if (out.size() == 1) {
    out[0] = (stream() >> 63) ? radius : -radius;
    return;
  }
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& v : out) {
      v = stream.normal();
      s += v * v;
    }
  } while (s == 0.0);
  const double scale = radius / std::sqrt(s);
  for (auto& v : out) v *= scale;
}

std::vector<double> sample_sphere(RandomStream& stream, std::size_t n, double radius) {
  std::vector<double> v(n);
  sample_sphere(stream, radius, v);
  return v;
}

OutputDistribution::OutputDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("OutputDistribution: empty weights");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("OutputDistribution: weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("OutputDistribution: weights sum to " + std::to_string(total) + ", not 1");
  }
  cdf_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

OutputDistribution OutputDistribution::uniform(std::size_t T) {
  if (T == 0) throw DomainError("OutputDistribution::uniform: T must be positive");
  return OutputDistribution(std::vector<double>(T, 1.0 / static_cast<double>(T)));
}

OutputDistribution OutputDistribution::from_steps(std::span<const double> gammas, double L) {
  if (gammas.empty()) throw DomainError("OutputDistribution::from_steps: no steps");
  if (!(L > 0.0)) throw DomainError("OutputDistribution::from_steps: L must be positive");
  std::vector<double> w(gammas.size());
  double total = 0.0;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double g = gammas[k];
    if (!(g > 0.0) || g > 1.0 / L) throw DomainError("OutputDistribution::from_steps: need 0 < gamma_k <= 1/L");
    w[k] = g - L * g * g;
    total += w[k];
  }
  if (!(total > 0.0)) throw DomainError("OutputDistribution::from_steps: every gamma_k equals 1/L");
  for (auto& v : w) v /= total;
  // Renormalize the rounding residue into the largest weight.
  const double drift = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += drift;
  return OutputDistribution(std::move(w));
}

std::size_t sample_output_index(RandomStream& stream, const OutputDistribution& dist) {
  const double u = stream.uniform01();
  const auto it = std::upper_bound(dist.cdf_.begin(), dist.cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(std::distance(dist.cdf_.begin(), it));
  return std::min(idx, dist.cdf_.size() - 1) + 1;
}

}  // namespace nashsg
