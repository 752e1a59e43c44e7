#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "piforge/corpus.hpp"
#include "piforge/covers.hpp"

using namespace piforge;

namespace {

// A line space with the given coordinates, unit weights.
Space line(const std::vector<double>& xs, double resolution, double cap) {
  std::vector<double> w(xs.size(), 1.0);
  std::vector<GraphEdge> e;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    e.push_back({static_cast<int>(i), static_cast<int>(i + 1),
                 xs[i + 1] - xs[i]});
  return Space(std::move(w), std::move(e), resolution, cap);
}

}  // namespace

TEST_CASE("build_nets basics") {
  SUBCASE("two points at distance 1, level 0") {
    Space sp = line({0.0, 1.0}, 0.1, 1.0);
    auto nets = build_nets(sp, {0, 1}, 0);
    CHECK(nets.levels[0] == std::vector<int>{0, 1});
  }
  SUBCASE("singleton K") {
    Space sp = line({0.0, 1.0}, 0.1, 1.0);
    auto nets = build_nets(sp, {0}, 3);
    for (const auto& lvl : nets.levels) CHECK(lvl == std::vector<int>{0});
  }
  SUBCASE("middle point too close for the coarse net") {
    Space sp = line({0.0, 0.4, 1.0}, 0.1, 1.0);
    auto nets = build_nets(sp, {0, 1, 2}, 0);
    CHECK(nets.levels[0] == std::vector<int>{0, 2});
  }
}

TEST_CASE("build_nets invariants on the fat Cantor triple") {
  TripleSpace t = make_fat_cantor(2);
  auto nets = build_nets(t.space, t.K, 5);
  for (int j = 0; j <= 5; ++j) {
    double sep = std::pow(2.0, -j);
    const auto& L = nets.levels[j];
    // Separation.
    for (std::size_t a = 0; a < L.size(); ++a)
      for (std::size_t b = a + 1; b < L.size(); ++b)
        CHECK(t.space.dist(L[a], L[b]) >= sep - 1e-9);
    // Maximality: every K point is within sep of some net point.
    for (int v : t.K) {
      double d = kInf;
      for (int m : L) d = std::min(d, t.space.dist(v, m));
      CHECK(d < sep + 1e-9);
    }
    // Nesting.
    if (j > 0)
      for (int m : nets.levels[j - 1]) CHECK(nets.contains(j, m));
  }
}

TEST_CASE("vitali_select") {
  Space sp = line({0.0, 1.0, 2.0}, 0.1, 2.0);
  SUBCASE("one ball survives") {
    auto sel = vitali_select(sp, {{0, 0, 0.5}});
    CHECK(sel.size() == 1);
  }
  SUBCASE("two disjoint balls both survive") {
    auto sel = vitali_select(sp, {{0, 0, 0.4}, {1, 2, 0.4}});
    CHECK(sel.size() == 2);
  }
  SUBCASE("three overlapping unit-spaced balls of radius 0.75") {
    auto sel = vitali_select(sp, {{0, 0, 0.75}, {1, 1, 0.75}, {2, 2, 0.75}});
    REQUIRE(sel.size() == 2);
    CHECK(sel[0].center == 0);
    CHECK(sel[1].center == 2);
  }
  SUBCASE("nonpositive radius rejected") {
    CHECK_THROWS_AS(vitali_select(sp, {{0, 0, 0.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("build_gap_points") {
  SUBCASE("A = K gives the empty gap set") {
    Space sp = line({0.0, 0.5, 1.0}, 0.1, 1.0);
    auto gaps = build_gap_points(sp, {0, 1, 2}, {0, 1, 2});
    CHECK(gaps.points.empty());
    CHECK(gaps.covering_ok);
  }
  SUBCASE("single midpoint gap at scale k = 1") {
    Space sp = line({0.0, 0.5, 1.0}, 0.1, 1.0);
    auto gaps = build_gap_points(sp, {0, 2}, {0, 1, 2});
    REQUIRE(gaps.points.size() == 1);
    CHECK(gaps.points[0].vertex == 1);
    CHECK(gaps.points[0].k == 1);
    CHECK(gaps.points[0].dist_K == doctest::Approx(0.5));
  }
  SUBCASE("two scales both selected") {
    Space sp = line({0.0, 0.25, 0.5, 1.0}, 0.05, 1.0);
    auto gaps = build_gap_points(sp, {0, 3}, {0, 1, 2, 3});
    REQUIRE(gaps.points.size() == 2);
    bool k1 = false, k2 = false;
    for (const auto& g : gaps.points) {
      if (g.vertex == 2 && g.k == 1) k1 = true;
      if (g.vertex == 1 && g.k == 2) k2 = true;
    }
    CHECK(k1);
    CHECK(k2);
  }
  SUBCASE("K must be inside A") {
    Space sp = line({0.0, 0.5, 1.0}, 0.1, 1.0);
    CHECK_THROWS_AS(build_gap_points(sp, {0, 2}, {0, 1}),
                    std::invalid_argument);
  }
}

TEST_CASE("gap-point invariants on the fat Cantor triple") {
  TripleSpace t = make_fat_cantor(3);
  auto gaps = build_gap_points(t.space, t.K, t.A);
  CHECK(gaps.covering_ok);
  std::vector<char> inK(t.space.size(), 0);
  for (int v : t.K) inK[v] = 1;
  for (const auto& g : gaps.points) {
    CHECK(!inK[g.vertex]);
    // Annulus condition.
    CHECK(g.dist_K <= std::pow(2.0, -g.k) + 1e-9);
    CHECK(g.dist_K > std::pow(2.0, -g.k - 1) - 1e-9);
  }
  // Disjointness of the Vitali balls across scales.
  for (std::size_t a = 0; a < gaps.points.size(); ++a)
    for (std::size_t b = a + 1; b < gaps.points.size(); ++b) {
      const auto& ga = gaps.points[a];
      const auto& gb = gaps.points[b];
      double need = std::pow(2.0, -ga.k - 15) + std::pow(2.0, -gb.k - 15);
      CHECK(t.space.dist(ga.vertex, gb.vertex) >= need - 1e-9);
    }
}

TEST_CASE("determinism of covers") {
  TripleSpace t = make_fat_cantor(2);
  auto n1 = build_nets(t.space, t.K, 4);
  auto n2 = build_nets(t.space, t.K, 4);
  CHECK(n1.levels == n2.levels);
  auto g1 = build_gap_points(t.space, t.K, t.A);
  auto g2 = build_gap_points(t.space, t.K, t.A);
  REQUIRE(g1.points.size() == g2.points.size());
  for (std::size_t i = 0; i < g1.points.size(); ++i) {
    CHECK(g1.points[i].vertex == g2.points[i].vertex);
    CHECK(g1.points[i].k == g2.points[i].k);
  }
}
