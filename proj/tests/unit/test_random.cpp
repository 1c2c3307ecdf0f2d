#include <cmath>
#include <set>

#include "doctest.h"
#include "nashsg/error.hpp"
#include "nashsg/random.hpp"
#include "nashsg/sets.hpp"

using namespace nashsg;

TEST_CASE("philox matches the Random123 known-answer vectors") {
  // kat_vectors: philox4x32 10 rounds.
  auto a = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto b = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(b == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto c = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("stream keys pack injectively") {
  std::set<std::uint64_t> ids;
  for (std::uint32_t path : {0u, 1u, 65535u})
    for (std::uint32_t player : {0u, 1u, 4095u})
      for (auto p : {Purpose::problem_noise, Purpose::direction, Purpose::test})
        for (std::uint64_t it : {0ull, 1ull, 0xffffffffull}) ids.insert(StreamKey{path, player, p, it}.pack());
  CHECK(ids.size() == 3 * 3 * 3 * 3);
  CHECK_THROWS(StreamKey{70000, 0, Purpose::test, 0}.pack());
}

TEST_CASE("streams are reproducible and independent of creation order") {
  RandomStream a(7, 11), b(7, 12);
  std::vector<double> first;
  for (int i = 0; i < 10; ++i) first.push_back(a.uniform01());
  (void)b();
  RandomStream a2(7, 11);
  for (int i = 0; i < 10; ++i) CHECK(a2.uniform01() == first[i]);
  RandomStream other(8, 11);
  CHECK(other.uniform01() != first[0]);
}

TEST_CASE("uniform and normal moments") {
  RandomStream s(1, 2);
  constexpr int n = 200000;
  double m = 0, q = 0, zn = 0, zq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = sample_uniform(s, 2.0, 4.0);
    REQUIRE(u >= 2.0);
    REQUIRE(u < 4.0);
    m += u;
    q += u * u;
    const double z = s.normal();
    zn += z;
    zq += z * z;
  }
  m /= n;
  CHECK(m == doctest::Approx(3.0).epsilon(0.003));
  CHECK(q / n - m * m == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(zn / n) < 0.01);
  CHECK(zq / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(sample_uniform(s, 1.0, 1.0), DomainError);
}

TEST_CASE("sphere samples have the requested radius and zero mean") {
  RandomStream s(5, 6);
  for (std::size_t n : {1u, 2u, 5u}) {
    std::vector<double> mean(n, 0.0);
    for (int t = 0; t < 20000; ++t) {
      const auto v = sample_sphere(s, n, 0.7);
      CHECK(norm(v) == doctest::Approx(0.7).epsilon(1e-12));
      for (std::size_t j = 0; j < n; ++j) mean[j] += v[j] / 20000;
    }
    for (double c : mean) CHECK(std::abs(c) < 0.02);
  }
}

TEST_CASE("output distribution") {
  CHECK_THROWS(OutputDistribution(std::vector<double>{}));
  CHECK_THROWS(OutputDistribution(std::vector<double>{1.0, -1.0}));
  const std::vector<double> g{0.1, 0.2};
  // L = 5: weights 0.1 - 0.05 and 0.2 - 0.2 = 0, so R = 1 always.
  const auto d = OutputDistribution::from_steps(g, 5.0);
  RandomStream s(1, 1);
  for (int t = 0; t < 100; ++t) CHECK(sample_output_index(s, d) == 1);
  CHECK_THROWS(OutputDistribution::from_steps(std::vector<double>{0.3}, 5.0));
  const auto u = OutputDistribution::uniform(3);
  std::vector<int> c(4, 0);
  for (int t = 0; t < 30000; ++t) ++c[sample_output_index(s, u)];
  CHECK(c[0] == 0);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(c[k] / 30000.0 - 1.0 / 3.0) < 0.015);
}
