#include "doctest.h"
#include "nashsg/error.hpp"
#include "nashsg/random.hpp"
#include "nashsg/sets.hpp"

using namespace nashsg;

TEST_CASE("box projection clamps and is idempotent") {
  const auto box = BoxSet::uniform(3, 0.0, 12.0);
  const std::vector<double> x{-1.0, 5.0, 20.0};
  const auto p = project(x, box);
  CHECK(p == std::vector<double>{0.0, 5.0, 12.0});
  CHECK(project(p, box) == p);
  CHECK(box.contains(p));
  CHECK_FALSE(box.contains(x));
}

TEST_CASE("projection is nonexpansive on random pairs") {
  const BoxSet box({-1.0, 0.0, 2.0, 0.0}, {1.0, 3.0, 2.5, 100.0});
  RandomStream s(3, StreamKey{0, 0, Purpose::test, 0});
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> x(4), y(4), d(4), e(4);
    for (std::size_t j = 0; j < 4; ++j) {
      x[j] = sample_uniform(s, -50.0, 150.0);
      y[j] = sample_uniform(s, -50.0, 150.0);
    }
    const auto px = project(x, box), py = project(y, box);
    for (std::size_t j = 0; j < 4; ++j) {
      d[j] = px[j] - py[j];
      e[j] = x[j] - y[j];
    }
    CHECK(norm(d) <= norm(e) + 1e-12);
  }
}

TEST_CASE("box construction rejects bad input") {
  CHECK_THROWS_AS(BoxSet({0.0}, {0.0, 1.0}), DimensionError);
  CHECK_THROWS_AS(BoxSet({1.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(project(std::vector<double>{1.0, 2.0}, BoxSet::uniform(3, 0, 1)), DimensionError);
}

TEST_CASE("box helpers") {
  const BoxSet box({0.0, 0.0}, {4.0, 2.0});
  CHECK(box.midpoint() == std::vector<double>{2.0, 1.0});
  CHECK(box.max_sq_distance_from(std::vector<double>{2.0, 1.0}) == doctest::Approx(5.0));
  CHECK(box.max_sq_distance_from(std::vector<double>{0.0, 0.0}) == doctest::Approx(20.0));
  const auto big = box.inflated(0.5);
  CHECK(big.lower()[0] == -0.5);
  CHECK(big.upper()[1] == 2.5);
}

TEST_CASE("partition offsets and profile blocks") {
  const Partition part({1, 2, 3});
  CHECK(part.players() == 3);
  CHECK(part.total_dim() == 6);
  CHECK(part.offset(2) == 3);
  CHECK(part.max_dim() == 3);
  StrategyProfile x(part, {1, 2, 3, 4, 5, 6});
  CHECK(slice_player(x, 1) == std::vector<double>{2, 3});
  write_player(x, 1, std::vector<double>{9, 9});
  CHECK(std::vector<double>(x.values().begin(), x.values().end()) == std::vector<double>{1, 9, 9, 4, 5, 6});
  CHECK_THROWS(write_player(x, 1, std::vector<double>{1}));
  CHECK_THROWS(StrategyProfile(part, {1, 2}));
  CHECK(Partition::scalar_players(4) == Partition({1, 1, 1, 1}));
}

TEST_CASE("product box flattens blocks") {
  ProductBox pb(Partition({1, 2}), {BoxSet::uniform(1, 0, 1), BoxSet::uniform(2, -1, 3)});
  CHECK(pb.flat().dim() == 3);
  CHECK(pb.flat().lower()[1] == -1.0);
  CHECK(pb.block(0).upper()[0] == 1.0);
}
