#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "piforge/corpus.hpp"

using namespace piforge;

namespace {

std::string thrown_message(std::function<void()> f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("generators") {
  SUBCASE("path") {
    Space p5 = make_path(5);
    CHECK(p5.size() == 5);
    CHECK(p5.dist(0, 4) == doctest::Approx(4.0));
    CHECK(p5.weight(2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_path(0), std::invalid_argument);
  }
  SUBCASE("cycle") {
    Space c5 = make_cycle(5);
    CHECK(c5.size() == 5);
    CHECK(c5.dist(0, 3) == doctest::Approx(2.0));  // wrap beats the long way
    CHECK_THROWS_AS(make_cycle(2), std::invalid_argument);
  }
  SUBCASE("grid") {
    Space g3 = make_grid(3, 2);
    CHECK(g3.size() == 9);
    CHECK(g3.dist(0, 8) == doctest::Approx(4.0));  // corner to corner
    CHECK_THROWS_AS(make_grid(3, 3), std::invalid_argument);
  }
  SUBCASE("star") {
    Space s = make_star(3, 2);
    CHECK(s.size() == 7);
    CHECK(s.dist(0, 2) == doctest::Approx(2.0));  // center to a ray end
    CHECK(s.dist(2, 4) == doctest::Approx(4.0));  // ray end to ray end
  }
  SUBCASE("glued lines share the junction vertex") {
    Space g = make_glued_lines(9);
    CHECK(g.size() == 17);
    // Arm ends are 8 and 16; crossing the junction sums the arm distances.
    CHECK(g.dist(8, 16) == doctest::Approx(16.0));
    CHECK(g.dist(3, 10) == doctest::Approx(3.0 + 2.0));
    CHECK(g.dist(0, 8) == doctest::Approx(8.0));
  }
  SUBCASE("weighted line clamps the origin weight") {
    Space w = make_weighted_line(21, 0.5);
    CHECK(w.size() == 21);
    CHECK(w.dist(0, 20) == doctest::Approx(2.0));  // [-1,1], step 0.1
    CHECK(w.weight(0) == doctest::Approx(1.0));    // |x| = 1
    CHECK(w.weight(10) == doctest::Approx(std::pow(0.05, 0.5)));  // x = 0
    CHECK(w.weight(5) == doctest::Approx(std::pow(0.5, 0.5)));
  }
  SUBCASE("fat Cantor triple") {
    TripleSpace t = make_fat_cantor(2);
    CHECK(t.A.size() == static_cast<std::size_t>(t.space.size()));
    CHECK(!t.K.empty());
    std::vector<char> inA(t.space.size(), 0);
    for (int v : t.A) inA[v] = 1;
    for (int v : t.K) CHECK(inA[v]);
    // Endpoints of [0,1] survive every removal stage.
    CHECK(t.K.front() == 0);
    CHECK(t.K.back() == t.space.size() - 1);
    // Strictly between the stage-1 removal, some midpoint is not in K.
    CHECK(t.K.size() < t.A.size());
    CHECK_THROWS_AS(make_fat_cantor(0), std::invalid_argument);
  }
  SUBCASE("random geometric is deterministic under seed") {
    Space a = make_random_geometric(12, 0.4, 7);
    Space b = make_random_geometric(12, 0.4, 7);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < a.size(); ++j)
        CHECK(a.dist(i, j) == doctest::Approx(b.dist(i, j)));
    // The metric is finite even when the radius graph is disconnected.
    Space c = make_random_geometric(12, 0.01, 7);
    for (int i = 0; i < c.size(); ++i)
      for (int j = 0; j < c.size(); ++j) CHECK(std::isfinite(c.dist(i, j)));
  }
}

TEST_CASE("spec-string generation") {
  SUBCASE("matches the direct constructors") {
    Space a = generate("path:5");
    Space b = make_path(5);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < a.size(); ++j)
        CHECK(a.dist(i, j) == doctest::Approx(b.dist(i, j)));
    CHECK(generate("grid:3:2").size() == 9);
    CHECK(generate("glued_lines:9").size() == 17);
    CHECK(generate("fat_cantor:2").size() == make_fat_cantor(2).space.size());
  }
  SUBCASE("identical spec and seed give identical spaces") {
    Space a = generate("random_geometric:10:0.4:3");
    Space b = generate("random_geometric:10:0.4:3");
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < a.size(); ++j)
        CHECK(a.dist(i, j) == doctest::Approx(b.dist(i, j)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(generate("moebius:5"), std::invalid_argument);
    CHECK_THROWS_AS(generate(""), std::invalid_argument);
    CHECK_THROWS_AS(generate("path"), std::invalid_argument);  // missing n
    CHECK_THROWS_AS(generate("cycle:2"), std::invalid_argument);
  }
}

TEST_CASE("space JSON") {
  SUBCASE("round trip is the identity on a graph space") {
    Space p5 = make_path(5);
    nlohmann::json j = space_to_json(p5);
    Space back = space_from_json(j);
    REQUIRE(back.size() == p5.size());
    for (int v = 0; v < p5.size(); ++v)
      CHECK(back.weight(v) == doctest::Approx(p5.weight(v)));
    for (int i = 0; i < p5.size(); ++i)
      for (int k = 0; k < p5.size(); ++k)
        CHECK(back.dist(i, k) == doctest::Approx(p5.dist(i, k)));
    CHECK(back.resolution() == doctest::Approx(p5.resolution()));
    CHECK(back.scale_cap() == doctest::Approx(p5.scale_cap()));
    CHECK(!back.from_matrix());
    // Canonical form is stable: serializing again gives the same JSON.
    CHECK(space_to_json(back) == j);
  }
  SUBCASE("round trip preserves matrix form") {
    std::vector<std::vector<double>> m = {
        {0.0, 1.0, 1.5}, {1.0, 0.0, 1.0}, {1.5, 1.0, 0.0}};
    Space sp({1.0, 2.0, 1.0}, std::move(m), 1.0, 2.0);
    Space back = space_from_json(space_to_json(sp));
    CHECK(back.from_matrix());
    CHECK(back.dist(0, 2) == doctest::Approx(1.5));
    CHECK(back.weight(1) == doctest::Approx(2.0));
  }
  SUBCASE("negative edge length is rejected naming the edge") {
    nlohmann::json j = space_to_json(make_path(3));
    j["edges"][1]["length"] = -1.0;
    std::string msg =
        thrown_message([&] { (void)space_from_json(j); });
    CHECK(msg.find("edge 1-2") != std::string::npos);
  }
  SUBCASE("triangle violation is rejected with the witnessing triple") {
    nlohmann::json j;
    j["vertices"] = {{{"id", 0}, {"weight", 1.0}},
                     {{"id", 1}, {"weight", 1.0}},
                     {{"id", 2}, {"weight", 1.0}}};
    j["matrix"] = {{0.0, 1.0, 3.0}, {1.0, 0.0, 1.0}, {3.0, 1.0, 0.0}};
    std::string msg =
        thrown_message([&] { (void)space_from_json(j); });
    CHECK(msg.find("triangle inequality") != std::string::npos);
    CHECK(msg.find("(0,2,1)") != std::string::npos);
  }
  SUBCASE("schema violations carry field diagnostics") {
    CHECK_THROWS_AS(space_from_json(nlohmann::json::object()),
                    std::invalid_argument);
    nlohmann::json j = space_to_json(make_path(3));
    j["vertices"][0]["id"] = 17;
    CHECK_THROWS_AS(space_from_json(j), std::invalid_argument);
    j = space_to_json(make_path(3));
    j.erase("edges");
    CHECK_THROWS_AS(space_from_json(j), std::invalid_argument);
  }
  SUBCASE("file round trip") {
    const char* path = "corpus_io_space.json";
    {
      std::ofstream out(path);
      out << space_to_json(make_path(5)).dump(2);
    }
    Space back = load_space(path);
    CHECK(back.size() == 5);
    CHECK(back.dist(0, 4) == doctest::Approx(4.0));
    std::remove(path);
    CHECK_THROWS_AS(load_space("no-such-file.json"), std::runtime_error);
  }
}

TEST_CASE("report JSON schema") {
  Report r;
  r.space_spec = "path:5";
  r.operation = "certify";
  r.param("C", "1.25");
  r.add(CheckEntry::le("min_undef <= delta d", 2.0, 1.6, "E={2}"));

  nlohmann::json j = report_to_json(r);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["space_spec"] == "path:5");
  CHECK(j["operation"] == "certify");
  CHECK(j["params"]["C"] == "1.25");
  REQUIRE(j["results"].size() == 1);
  const auto& e = j["results"][0];
  for (const char* field : {"check", "lhs", "rhs", "margin", "witness"})
    CHECK(e.contains(field));
  CHECK(e["check"] == "min_undef <= delta d");
  CHECK(e["lhs"] == doctest::Approx(2.0));
  CHECK(e["rhs"] == doctest::Approx(1.6));
  CHECK(e["passed"] == false);
  CHECK(e["witness"] == "E={2}");
  // Identical reports serialize byte-identically.
  CHECK(report_to_json(r).dump(2) == j.dump(2));

  const char* path = "corpus_io_report.json";
  save_report(path, r);
  {
    std::ifstream in(path);
    nlohmann::json back;
    in >> back;
    CHECK(back == j);
  }
  std::remove(path);
}
