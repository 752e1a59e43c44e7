#pragma once

// Canonical example-space generators, JSON ingestion, and the report schema.

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "piforge/core.hpp"
#include "piforge/space.hpp"

namespace piforge {

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline Space make_path(int n) {
  if (n < 1) throw std::invalid_argument("path: n >= 1");
  std::vector<double> w(n, 1.0);
  std::vector<GraphEdge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return Space(std::move(w), std::move(e), 1.0, std::max(1.0, double(n - 1)));
}

inline Space make_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: n >= 3");
  std::vector<double> w(n, 1.0);
  std::vector<GraphEdge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return Space(std::move(w), std::move(e), 1.0, std::floor(n / 2.0));
}

inline Space make_grid(int n, int dim) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (dim == 1) return make_path(n);
  if (n < 1) throw std::invalid_argument("grid: n >= 1");
  std::vector<double> w(n * n, 1.0);
  std::vector<GraphEdge> e;
  auto id = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i + 1 < n) e.push_back({id(i, j), id(i + 1, j), 1.0});
      if (j + 1 < n) e.push_back({id(i, j), id(i, j + 1), 1.0});
    }
  return Space(std::move(w), std::move(e), 1.0,
               std::max(1.0, 2.0 * (n - 1)));
}

inline Space make_star(int rays, int len) {
  if (rays < 1 || len < 1) throw std::invalid_argument("star: rays,len >= 1");
  int n = 1 + rays * len;
  std::vector<double> w(n, 1.0);
  std::vector<GraphEdge> e;
  for (int r = 0; r < rays; ++r) {
    int base = 1 + r * len;
    e.push_back({0, base, 1.0});
    for (int i = 0; i + 1 < len; ++i) e.push_back({base + i, base + i + 1, 1.0});
  }
  return Space(std::move(w), std::move(e), 1.0, std::max(1.0, 2.0 * len));
}

// Two P_n sharing vertex 0 (the junction); distances across the junction are
// the sum of the two arm distances.
inline Space make_glued_lines(int n) {
  if (n < 2) throw std::invalid_argument("glued_lines: n >= 2");
  int total = 2 * n - 1;
  std::vector<double> w(total, 1.0);
  std::vector<GraphEdge> e;
  // arm A: 1..n-1, arm B: n..2n-2
  e.push_back({0, 1, 1.0});
  for (int i = 1; i + 1 <= n - 1; ++i) e.push_back({i, i + 1, 1.0});
  e.push_back({0, n, 1.0});
  for (int i = n; i + 1 <= 2 * n - 2; ++i) e.push_back({i, i + 1, 1.0});
  return Space(std::move(w), std::move(e), 1.0, std::max(1.0, 2.0 * (n - 1)));
}

// Line on [-1,1] with n vertices; w(x) = max(|x|, 0.05)^a (the clamp keeps
// the atom at the origin strictly positive).
inline Space make_weighted_line(int n, double a) {
  if (n < 2) throw std::invalid_argument("weighted_line: n >= 2");
  double step = 2.0 / (n - 1);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double x = -1.0 + step * i;
    w[i] = std::pow(std::max(std::abs(x), 0.05), a);
  }
  std::vector<GraphEdge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, step});
  return Space(std::move(w), std::move(e), step, 2.0);
}

struct TripleSpace {
  Space space;            // ambient X
  std::vector<int> A;     // dense carrier
  std::vector<int> K;     // compact target set
};

// Fat Cantor set on [0,1]: at stage j remove the open middle interval of
// length 4^{-j} from each surviving interval; K keeps positive measure.
// The ambient is a uniform grid of step 4^{-depth}/2 so the finest removed
// intervals contain exactly one interior grid point.
inline TripleSpace make_fat_cantor(int depth) {
  if (depth < 1 || depth > 6) throw std::invalid_argument("fat_cantor: depth in 1..6");
  double step = std::pow(4.0, -depth) / 2.0;
  int n = static_cast<int>(std::llround(1.0 / step)) + 1;
  std::vector<double> w(n, step);
  std::vector<GraphEdge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, step});
  Space sp(std::move(w), std::move(e), step, 1.0);

  std::vector<std::pair<double, double>> intervals = {{0.0, 1.0}};
  for (int j = 1; j <= depth; ++j) {
    std::vector<std::pair<double, double>> next;
    double remove = std::pow(4.0, -j);
    for (auto [a, b] : intervals) {
      double mid = (a + b) / 2.0;
      next.push_back({a, mid - remove / 2.0});
      next.push_back({mid + remove / 2.0, b});
    }
    intervals = std::move(next);
  }
  TripleSpace t{std::move(sp), {}, {}};
  for (int i = 0; i < n; ++i) {
    t.A.push_back(i);
    double x = step * i;
    for (auto [a, b] : intervals)
      if (x >= a - kTol && x <= b + kTol) {
        t.K.push_back(i);
        break;
      }
  }
  return t;
}

inline Space make_random_geometric(int n, double radius, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_geometric: n >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) {
    p.first = uni(rng);
    p.second = uni(rng);
  }
  auto eu = [&](int i, int j) {
    double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
    return std::hypot(dx, dy);
  };
  std::vector<GraphEdge> e;
  double minlen = kInf;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = eu(i, j);
      if (d <= radius && d > 0.0) {
        e.push_back({i, j, d});
        minlen = std::min(minlen, d);
      }
    }
  // Stitch components with nearest cross pairs so the metric stays finite.
  std::vector<int> comp(n, -1);
  auto label = [&]() {
    std::fill(comp.begin(), comp.end(), -1);
    int c = 0;
    for (int s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> stack = {s};
      comp[s] = c;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& ed : e)
          for (int v : {ed.u == u ? ed.v : -1, ed.v == u ? ed.u : -1})
            if (v >= 0 && comp[v] < 0) {
              comp[v] = c;
              stack.push_back(v);
            }
      }
      ++c;
    }
    return c;
  };
  while (label() > 1) {
    double best = kInf;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (comp[i] != comp[j] && eu(i, j) < best && eu(i, j) > 0.0) {
          best = eu(i, j);
          bi = i;
          bj = j;
        }
    e.push_back({bi, bj, best});
    minlen = std::min(minlen, best);
  }
  std::vector<double> w(n, 1.0);
  double res = (minlen < kInf) ? minlen : 1.0;
  return Space(std::move(w), std::move(e), res, 1.0);
}

// "name:arg1:arg2" spec strings, e.g. "path:5", "grid:3:2",
// "fat_cantor:3" (returns ambient only; triple via make_fat_cantor).
inline Space generate(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw std::invalid_argument("empty space spec");
  const std::string& g = parts[0];
  auto argi = [&](std::size_t i, int dflt = -1) {
    if (i < parts.size()) return std::stoi(parts[i]);
    if (dflt < 0) throw std::invalid_argument("missing argument in spec " + spec);
    return dflt;
  };
  auto argd = [&](std::size_t i, double dflt) {
    return i < parts.size() ? std::stod(parts[i]) : dflt;
  };
  if (g == "path") return make_path(argi(1));
  if (g == "cycle") return make_cycle(argi(1));
  if (g == "grid") return make_grid(argi(1), argi(2, 2));
  if (g == "star") return make_star(argi(1), argi(2, 1));
  if (g == "glued_lines") return make_glued_lines(argi(1));
  if (g == "weighted_line") return make_weighted_line(argi(1), argd(2, 0.5));
  if (g == "fat_cantor") return make_fat_cantor(argi(1)).space;
  if (g == "random_geometric")
    return make_random_geometric(argi(1), argd(2, 0.4),
                                 static_cast<std::uint64_t>(argi(3, 1)));
  throw std::invalid_argument("unknown generator: " + g);
}

// ---------------------------------------------------------------------------
// JSON schemas
// ---------------------------------------------------------------------------

inline nlohmann::json space_to_json(const Space& sp) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < sp.size(); ++v)
    j["vertices"].push_back({{"id", v}, {"weight", sp.weight(v)}});
  if (sp.from_matrix()) {
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < sp.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < sp.size(); ++k) row.push_back(sp.dist(i, k));
      m.push_back(row);
    }
    j["matrix"] = m;
  } else {
    j["edges"] = nlohmann::json::array();
    for (const auto& e : sp.edges())
      j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  }
  j["resolution"] = sp.resolution();
  j["scale_cap"] = sp.scale_cap();
  return j;
}

inline Space space_from_json(const nlohmann::json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array() ||
      j["vertices"].empty())
    throw std::invalid_argument("space JSON: missing or empty 'vertices'");
  const auto& vs = j["vertices"];
  std::vector<double> w(vs.size(), 0.0);
  for (const auto& v : vs) {
    if (!v.contains("id") || !v.contains("weight"))
      throw std::invalid_argument("space JSON: vertex needs 'id' and 'weight'");
    int id = v["id"].get<int>();
    if (id < 0 || id >= static_cast<int>(vs.size()))
      throw std::invalid_argument("space JSON: vertex id out of range: " +
                                  std::to_string(id));
    w[id] = v["weight"].get<double>();
  }
  double res = j.value("resolution", 1.0);
  double cap = j.value("scale_cap", 1.0);
  if (j.contains("matrix")) {
    std::vector<std::vector<double>> m;
    for (const auto& row : j["matrix"])
      m.push_back(row.get<std::vector<double>>());
    return Space(std::move(w), std::move(m), res, cap);
  }
  if (!j.contains("edges"))
    throw std::invalid_argument("space JSON: need 'edges' or 'matrix'");
  std::vector<GraphEdge> edges;
  for (const auto& e : j["edges"]) {
    GraphEdge ge{e.at("u").get<int>(), e.at("v").get<int>(),
                 e.at("length").get<double>()};
    if (!(ge.length > 0.0))
      throw std::invalid_argument("space JSON: edge " + std::to_string(ge.u) +
                                  "-" + std::to_string(ge.v) +
                                  " has nonpositive length");
    edges.push_back(ge);
  }
  return Space(std::move(w), std::move(edges), res, cap);
}

inline Space load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open space file: " + path);
  nlohmann::json j;
  in >> j;
  return space_from_json(j);
}

inline nlohmann::json report_to_json(const Report& r) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["space_spec"] = r.space_spec;
  j["operation"] = r.operation;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  j["results"] = nlohmann::json::array();
  for (const auto& e : r.results)
    j["results"].push_back({{"check", e.check},
                            {"lhs", e.lhs},
                            {"rhs", e.rhs},
                            {"margin", e.margin},
                            {"passed", e.passed},
                            {"witness", e.witness}});
  return j;
}

inline void save_report(const std::string& path, const Report& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file: " + path);
  out << report_to_json(r).dump(2) << "\n";
}

}  // namespace piforge
