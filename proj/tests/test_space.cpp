#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "piforge/corpus.hpp"
#include "piforge/space.hpp"

using namespace piforge;

namespace {
bool has_member(const BallData& b, int v) {
  for (int m : b.members)
    if (m == v) return true;
  return false;
}
}  // namespace

TEST_CASE("open balls on the path P5") {
  Space p5 = make_path(5);
  SUBCASE("center v2, r = 1.5") {
    BallData b = ball(p5, 2, 1.5);
    CHECK(b.members.size() == 3);
    CHECK(has_member(b, 1));
    CHECK(has_member(b, 2));
    CHECK(has_member(b, 3));
    CHECK(b.mass == doctest::Approx(3.0));
  }
  SUBCASE("radius below the minimum positive distance") {
    BallData b = ball(p5, 2, 0.5);
    CHECK(b.members == std::vector<int>{2});
  }
  SUBCASE("radius beyond the diameter") {
    BallData b = ball(p5, 0, 10.0);
    CHECK(b.members.size() == 5);
    CHECK(b.mass == doctest::Approx(5.0));
  }
  SUBCASE("open-ball boundary exclusion") {
    CHECK(!has_member(ball(p5, 2, 1.0), 1));  // d = r excluded
  }
  SUBCASE("nonpositive radius rejected") {
    CHECK_THROWS_AS(ball(p5, 0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("doubling constants") {
  SUBCASE("single vertex") {
    Space one({1.0}, std::vector<GraphEdge>{}, 1.0, 1.0);
    CHECK(doubling_constant(one) == doctest::Approx(1.0));
  }
  SUBCASE("unit cycle C8 at r = 1") {
    Space c8 = make_cycle(8);
    // B(x,2) has 3 members, B(x,1) has 1 member at every vertex.
    for (int x = 0; x < 8; ++x)
      CHECK(ball_mass(c8, x, 2.0) / ball_mass(c8, x, 1.0) ==
            doctest::Approx(3.0));
    std::vector<int> all;
    for (int x = 0; x < 8; ++x) all.push_back(x);
    CHECK(doubling_constant(c8, {1.0}, all) >= 3.0 - 1e-12);
  }
  SUBCASE("P5 ratio at v0, r = 1.5") {
    Space p5 = make_path(5);
    CHECK(ball_mass(p5, 0, 3.0) / ball_mass(p5, 0, 1.5) ==
          doctest::Approx(1.5));
  }
  SUBCASE("always at least 1") {
    CHECK(doubling_constant(make_star(3, 2)) >= 1.0);
    CHECK(doubling_constant(make_grid(3, 2)) >= 1.0);
  }
}

TEST_CASE("maximal function") {
  Space p5 = make_path(5);
  SUBCASE("constant field") {
    ScalarField f(5, -2.5);
    ScalarField M = maximal_function(p5, f, 1.0);
    for (double v : M) CHECK(v == doctest::Approx(2.5));
  }
  ScalarField ind(5, 0.0);
  ind[2] = 1.0;
  SUBCASE("indicator of v2, s = 1: no admissible ball reaches v1") {
    ScalarField M = maximal_function(p5, ind, 1.0);
    CHECK(M[1] == doctest::Approx(0.0));
  }
  SUBCASE("indicator of v2, s = 1.5 sees 1/3 at v1") {
    ScalarField M = maximal_function(p5, ind, 1.5);
    CHECK(M[1] == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("weak (1,1) maximal bound with constant D^3") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const char* spec : {"path:7", "cycle:8", "grid:3", "star:3:2"}) {
    Space sp = generate(spec);
    double D = doubling_constant(sp);
    double D3 = D * D * D;
    for (int trial = 0; trial < 50; ++trial) {
      ScalarField f(sp.size());
      for (auto& v : f) v = uni(rng);
      double s = 0.5 + 2.0 * uni(rng);
      double lambda = 0.05 + uni(rng);
      int x = static_cast<int>(uni(rng) * sp.size()) % sp.size();
      double r = 0.5 + uni(rng) * sp.scale_cap();
      ScalarField M = maximal_function(sp, f, s);
      double lhs = 0.0;
      for (int v : ball(sp, x, r).members)
        if (M[v] > lambda) lhs += sp.weight(v);
      double l1 = 0.0;
      for (int v : ball(sp, x, r + s).members)
        l1 += sp.weight(v) * std::abs(f[v]);
      CHECK(lhs <= D3 * l1 / lambda + 1e-9);
    }
  }
}

TEST_CASE("mean deviation and the averaging lemma") {
  Space p5 = make_path(5);
  ScalarField f = {0, 1, 2, 3, 4};
  BallData b = ball(p5, 2, 10.0);
  SUBCASE("deviation from the mean") {
    CHECK(mean_deviation_from_mean(p5, f, b) == doctest::Approx(1.2));
  }
  SUBCASE("deviation from zero, and the factor-2 bound") {
    CHECK(mean_deviation(p5, f, b, 0.0) == doctest::Approx(2.0));
    CHECK(mean_deviation_from_mean(p5, f, b) <= 2.0 * 2.0 + 1e-12);
  }
  SUBCASE("constant field") {
    ScalarField c(5, 3.0);
    CHECK(mean_deviation_from_mean(p5, c, b) == doctest::Approx(0.0));
  }
  SUBCASE("factor-2 bound for many anchors") {
    for (double a : {-1.0, 0.5, 2.0, 3.7})
      CHECK(mean_deviation_from_mean(p5, f, b) <=
            2.0 * mean_deviation(p5, f, b, a) + 1e-12);
  }
}

TEST_CASE("uniform perfectness") {
  SUBCASE("uniform P9 along all vertices, r0 = 4") {
    Space p9 = make_path(9);
    std::vector<int> all;
    for (int i = 0; i < 9; ++i) all.push_back(i);
    auto res = uniform_perfectness(p9, all, 4.0);
    CHECK(!res.fails);
    CHECK(res.L <= 2.0 + 1e-12);
  }
  SUBCASE("two isolated points fail") {
    Space two({1.0, 1.0}, std::vector<GraphEdge>{{0, 1, 1.0}}, 0.1, 2.0);
    auto res = uniform_perfectness(two, {0}, 2.0);
    CHECK(res.fails);
  }
  SUBCASE("vacuous when r0 is below every exterior distance") {
    Space p5 = make_path(5);
    auto res = uniform_perfectness(p5, {0}, 0.5);
    CHECK(!res.fails);
    CHECK(res.L == doctest::Approx(1.0));
  }
}

TEST_CASE("density points") {
  Space p5 = make_path(5);
  std::vector<int> all = {0, 1, 2, 3, 4};
  SUBCASE("full set is returned whole") {
    CHECK(density_points(p5, all, 0.3, 1.5) == all);
  }
  SUBCASE("P5 with A = {v0..v3}") {
    std::vector<int> A = {0, 1, 2, 3};
    auto d = density_points(p5, A, 0.3, 1.5);
    bool has1 = false, has3 = false;
    for (int v : d) {
      if (v == 1) has1 = true;
      if (v == 3) has3 = true;
    }
    CHECK(has1);
    CHECK(!has3);  // density 2/3 < 0.7 at v3
  }
  SUBCASE("eps close to 1 makes the bound vacuous") {
    std::vector<int> A = {0, 1, 2, 3};
    CHECK(density_points(p5, A, 0.999, 1.5) == A);
  }
}

TEST_CASE("space invariants") {
  for (const char* spec :
       {"path:6", "cycle:7", "grid:3", "star:3:2", "glued_lines:5",
        "weighted_line:11:0.5", "random_geometric:9:0.4:3"}) {
    Space sp = generate(spec);
    for (int v = 0; v < sp.size(); ++v) CHECK(sp.weight(v) > 0.0);
    // Metric axioms by exhaustive scan.
    for (int i = 0; i < sp.size(); ++i) {
      CHECK(sp.dist(i, i) == doctest::Approx(0.0));
      for (int j = 0; j < sp.size(); ++j) {
        CHECK(sp.dist(i, j) == doctest::Approx(sp.dist(j, i)));
        if (i != j) CHECK(sp.dist(i, j) > 0.0);
        for (int k = 0; k < sp.size(); ++k)
          CHECK(sp.dist(i, k) <= sp.dist(i, j) + sp.dist(j, k) + 1e-9);
      }
    }
  }
}
