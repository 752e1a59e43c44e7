#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "piforge/connectivity.hpp"
#include "piforge/corpus.hpp"
#include "piforge/oracle.hpp"
#include "piforge/poincare.hpp"

using namespace piforge;

TEST_CASE("lip field") {
  Space p5 = make_path(5);
  SUBCASE("constant") {
    ScalarField f(5, 3.0);
    for (double v : lip_field(p5, f)) CHECK(v == doctest::Approx(0.0));
  }
  SUBCASE("linear") {
    ScalarField f = {0, 1, 2, 3, 4};
    for (double v : lip_field(p5, f)) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("indicator of v2") {
    ScalarField f(5, 0.0);
    f[2] = 1.0;
    auto lip = lip_field(p5, f);
    CHECK(lip[0] == doctest::Approx(0.0));
    CHECK(lip[1] == doctest::Approx(1.0));
    CHECK(lip[2] == doctest::Approx(1.0));
    CHECK(lip[3] == doctest::Approx(1.0));
    CHECK(lip[4] == doctest::Approx(0.0));
  }
}

TEST_CASE("pi_scan") {
  Space p5 = make_path(5);
  SUBCASE("constant functions contribute ratio 0") {
    std::vector<NamedField> fam = {{"const", ScalarField(5, 7.0)}};
    auto rep = pi_scan(p5, 2.0, 1.0, fam, {2.5});
    CHECK(rep.C_PI_hat == doctest::Approx(0.0));
    CHECK(!rep.zero_gradient_violation);
  }
  SUBCASE("linear field on the full ball: ratio 0.48") {
    std::vector<NamedField> fam = {{"linear", {0, 1, 2, 3, 4}}};
    auto rep = pi_scan(p5, 2.0, 1.0, fam, {2.5}, {2});
    CHECK(rep.C_PI_hat == doctest::Approx(0.48));
  }
  SUBCASE("affine invariance of the ratio") {
    std::vector<NamedField> f1 = {{"f", {0, 1, 2, 3, 4}}};
    std::vector<NamedField> f2 = {{"af+b", {10, 7, 4, 1, -2}}};  // -3f + 10
    auto r1 = pi_scan(p5, 2.0, 1.0, f1, {1.5, 2.5});
    auto r2 = pi_scan(p5, 2.0, 1.0, f2, {1.5, 2.5});
    CHECK(r1.C_PI_hat == doctest::Approx(r2.C_PI_hat));
  }
}

TEST_CASE("modulus") {
  SUBCASE("two-vertex analytic optimum") {
    for (double r : {0.5, 1.0, 2.0})
      for (double p : {2.0, 3.0}) {
        Space two({1.0, 1.0}, std::vector<GraphEdge>{{0, 1, r}}, r, 2.0 * r);
        auto res = modulus(two, 0, 1, 1.0, p, 2.0 * r);
        REQUIRE(res.feasible);
        CHECK(res.value == doctest::Approx(std::pow(r, -p)).epsilon(1e-9));
      }
  }
  SUBCASE("matrix space matches the graph two-vertex optimum") {
    // Matrix spaces treat every pair as an edge, so the direct curve from
    // 0 to 1 exists and the analytic value r^{-p} applies.
    std::vector<std::vector<double>> m = {{0.0, 1.0}, {1.0, 0.0}};
    Space sp({1.0, 1.0}, std::move(m), 1.0, 2.0);
    auto res = modulus(sp, 0, 1, 1.0, 2.0, 2.0);
    REQUIRE(res.feasible);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("P5 geodesic against the grid-search oracle") {
    Space p5 = make_path(5);
    auto res = modulus(p5, 0, 4, 1.0, 2.0, 4.0);
    REQUIRE(res.feasible);
    auto grid = grid_modulus(p5, 0, 4, 1.0, 2.0, 4.0);
    CHECK(res.value == doctest::Approx(grid.value).epsilon(1e-4));
  }
  SUBCASE("oracle agreement on a space with competing paths") {
    Space c5 = make_cycle(5);
    auto res = modulus(c5, 0, 2, 1.5, 2.0, 3.0);
    REQUIRE(res.feasible);
    auto grid = grid_modulus(c5, 0, 2, 1.5, 2.0, 3.0);
    CHECK(res.value == doctest::Approx(grid.value).epsilon(1e-4));
  }
  SUBCASE("monotone nondecreasing in C") {
    Space c6 = make_cycle(6);
    auto a = modulus(c6, 0, 2, 1.0, 2.0, 4.0);
    auto b = modulus(c6, 0, 2, 2.0, 2.0, 4.0);
    CHECK(a.value <= b.value + 1e-9);
  }
  SUBCASE("lower bound from the averaged-modulus estimate") {
    // The line is finely 1-connected; C3 from the Thm 1.7 constants.
    Space p5 = make_path(5);
    double D = doubling_constant(p5);
    double alpha = 1.0, C1 = 2.0, p = 2.0;
    double D4 = std::pow(D, 4.0);
    double Mp = 2.0 * std::pow(D4, 1.0 / (p * alpha - 1.0));
    double dp = std::pow(D4 / std::pow(Mp, p), alpha);
    REQUIRE(Mp * dp < 1.0);
    double C3 = C1 * Mp / (1.0 - Mp * dp);
    double r = p5.dist(0, 4);
    auto res = modulus(p5, 0, 4, 2.0, p, 8.0);
    REQUIRE(res.feasible);
    // Mod is nondecreasing in C, so the C=2 value bounds Gamma_{C3} below.
    CHECK(res.value >= modulus_lower_bound(C3, r, p) - 1e-12);
  }
}

TEST_CASE("monotone function helpers") {
  auto pw = make_monotone_fn("power:2");
  CHECK(pw(3.0) == doctest::Approx(9.0));
  CHECK(pw.right_inverse(9.0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(pw.gauge(9.0) == doctest::Approx(3.0).epsilon(1e-9));
  auto sc = make_monotone_fn("scaled-power:2:1");
  CHECK(sc(3.0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(make_monotone_fn("bogus"), std::invalid_argument);
}

TEST_CASE("non-homogeneous Poincare form") {
  SUBCASE("B formula for identity forms at D = 2") {
    Space two({1.0, 1.0}, std::vector<GraphEdge>{{0, 1, 1.0}}, 1.0, 1.0);
    CHECK(doubling_constant(two) == doctest::Approx(2.0));
    NonHomogeneousForm form{make_monotone_fn("identity"),
                            make_monotone_fn("identity"), 1.0};
    std::vector<GradientPair> fam = {
        {"const", ScalarField(2, 1.0), ScalarField(2, 0.0)}};
    auto rep = check_nonhomogeneous_pi(two, form, fam, {1.0});
    CHECK(rep.B == doctest::Approx(1280.0));
    CHECK(rep.checks.all_passed());  // constant f: lhs 0
  }
  SUBCASE("power form reduces to the standard scan") {
    Space p5 = make_path(5);
    double p = 2.0;
    std::vector<NamedField> fam = {{"linear", {0, 1, 2, 3, 4}}};
    auto scan = pi_scan(p5, p, 1.0, fam, {2.5}, {2});
    // Psi(t) = C_PI_hat * t^{1/p} makes the worst ball exactly tight.
    std::ostringstream psi;
    psi << "scaled-power:" << std::setprecision(17) << scan.C_PI_hat
        << ":" << 1.0 / p;
    NonHomogeneousForm form{make_monotone_fn("power:2"),
                            make_monotone_fn(psi.str()), 1.0};
    std::vector<GradientPair> gfam = {
        {"linear", {0, 1, 2, 3, 4}, lip_field(p5, {0, 1, 2, 3, 4})}};
    auto rep = check_nonhomogeneous_pi(p5, form, gfam, {2.5}, {2});
    CHECK(rep.worst_margin == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.checks.all_passed());
  }
  SUBCASE("invalid upper gradient rejected") {
    Space p5 = make_path(5);
    NonHomogeneousForm form{make_monotone_fn("identity"),
                            make_monotone_fn("identity"), 1.0};
    std::vector<GradientPair> fam = {
        {"cheat", {0, 1, 2, 3, 4}, ScalarField(5, 0.0)}};
    CHECK_THROWS_AS(check_nonhomogeneous_pi(p5, form, fam, {2.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("Muckenhoupt A-infinity") {
  SUBCASE("uniform weight holds whenever delta <= eps") {
    Space p9 = make_path(9);
    ScalarField w(9, 1.0);
    auto v = check_ainfty(p9, w, 0.3, 0.3, {2.0, 4.0});
    CHECK(v.holds);
  }
  SUBCASE("weighted line at (0.1, 0.5)") {
    Space line = make_weighted_line(21, 0.5);
    ScalarField w(21);
    for (int i = 0; i < 21; ++i) {
      double x = -1.0 + 0.1 * i;
      w[i] = std::pow(std::max(std::abs(x), 0.05), 0.5);
    }
    auto v = check_ainfty(line, w, 0.1, 0.5, {0.5, 1.0});
    CHECK(v.holds);
  }
  SUBCASE("near-zero nu on half the mu mass is refuted") {
    std::vector<double> mu = {5.0, 1.25, 1.25, 1.25, 1.25};
    std::vector<GraphEdge> e;
    for (int i = 0; i + 1 < 5; ++i) e.push_back({i, i + 1, 1.0});
    Space sp(std::move(mu), std::move(e), 1.0, 4.0);
    ScalarField w = {1e-6, 1.0, 1.0, 1.0, 1.0};
    auto v = check_ainfty(sp, w, 0.1, 0.4, {10.0});
    CHECK(!v.holds);
  }
  SUBCASE("parameter validation") {
    Space p5 = make_path(5);
    CHECK_THROWS_AS(check_ainfty(p5, ScalarField(5, 1.0), 0.0, 0.5, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_ainfty(p5, ScalarField(5, 0.0), 0.1, 0.5, {1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("weighted spaces") {
  Space p9 = make_path(9);
  SUBCASE("unit weight is the identity") {
    Space w = weighted_space(p9, ScalarField(9, 1.0));
    for (int v = 0; v < 9; ++v)
      CHECK(w.weight(v) == doctest::Approx(p9.weight(v)));
  }
  SUBCASE("constant weight preserves doubling ratios") {
    Space w = weighted_space(p9, ScalarField(9, 2.0));
    CHECK(doubling_constant(w) == doctest::Approx(doubling_constant(p9)));
  }
  SUBCASE("sqrt-abs weight keeps doubling finite") {
    Space line = make_weighted_line(21, 0.0);
    ScalarField w(21);
    for (int i = 0; i < 21; ++i) {
      double x = -1.0 + 0.1 * i;
      w[i] = std::pow(std::max(std::abs(x), 0.05), 0.5);
    }
    double D = doubling_constant(weighted_space(line, w));
    CHECK(D >= 1.0);
    CHECK(D < 100.0);
  }
}

TEST_CASE("A-infinity weight implies doubling of the weighted measure") {
  Space p9 = make_path(9);
  ScalarField w(9);
  for (int i = 0; i < 9; ++i) w[i] = 1.0 + 0.1 * i;
  auto v = check_ainfty(p9, w, 0.2, 0.6, {2.0, 4.0});
  if (v.holds) {
    double D = doubling_constant(weighted_space(p9, w));
    CHECK(std::isfinite(D));
  }
}
