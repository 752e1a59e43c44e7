#pragma once

// Curve fragments: alternating solid edge-traversals and gap jumps, the §2
// surgery lemmas, fragment integrals, and the Pareto-optimal
// obstacle-avoiding fragment search behind every connectivity statement.

#include <algorithm>
#include <queue>
#include <string>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/space.hpp"

namespace piforge {

struct Leg {
  enum Kind { SOLID, GAP } kind = SOLID;
  int u = 0;
  int v = 0;
  double length = 0.0;  // edge length for SOLID, d(u,v) for GAP
};

struct CurveFragment {
  int start = 0;
  int end = 0;
  std::vector<Leg> legs;

  double len() const {
    double s = 0.0;
    for (const auto& l : legs) s += l.length;
    return s;
  }
  double undef() const {
    double s = 0.0;
    for (const auto& l : legs)
      if (l.kind == Leg::GAP) s += l.length;
    return s;
  }
  bool gap_free() const {
    for (const auto& l : legs)
      if (l.kind == Leg::GAP) return false;
    return true;
  }
  // All visited vertices in order, including endpoints.
  std::vector<int> visited() const {
    std::vector<int> vs = {start};
    for (const auto& l : legs) vs.push_back(l.v);
    return vs;
  }
  void validate() const {
    int at = start;
    for (const auto& l : legs) {
      if (l.u != at) throw std::invalid_argument("fragment legs do not chain");
      at = l.v;
    }
    if (at != end) throw std::invalid_argument("fragment end mismatch");
  }
};

inline CurveFragment two_point_fragment(const Space& sp, int x, int y) {
  CurveFragment f;
  f.start = x;
  f.end = y;
  if (x != y) f.legs.push_back({Leg::GAP, x, y, sp.dist(x, y)});
  return f;
}

// Lemma "adjust" analogue: merge consecutive gaps (triangle inequality can
// only shrink undef) and drop zero-length legs.  Idempotent.
inline CurveFragment normalize(const Space& sp, const CurveFragment& in) {
  in.validate();
  CurveFragment out;
  out.start = in.start;
  out.end = in.end;
  for (const auto& l : in.legs) {
    if (l.u == l.v && l.length <= kTol) continue;  // zero-length self leg
    if (l.kind == Leg::GAP && !out.legs.empty() &&
        out.legs.back().kind == Leg::GAP) {
      Leg& prev = out.legs.back();
      int a = prev.u, c = l.v;
      if (a == c) {
        out.legs.pop_back();
        continue;
      }
      prev = {Leg::GAP, a, c, sp.dist(a, c)};
      continue;
    }
    out.legs.push_back(l);
  }
  return out;
}

// Lemma "adjustment" bookkeeping: stretched parameter length after dilating
// each gap i by factor C_i in (1, C).  The fragment itself is unchanged in
// the discrete image; the Lemma bound max(K') <= max(K) + (C-1)|Undef| must
// hold and is the caller's check.
inline double dilate_gaps(const CurveFragment& f,
                          const std::vector<double>& factors, double C) {
  std::size_t gi = 0;
  double total = 0.0;
  for (const auto& l : f.legs) {
    if (l.kind == Leg::GAP) {
      if (gi >= factors.size())
        throw std::invalid_argument("dilate_gaps: missing factor");
      double c = factors[gi++];
      if (!(c > 1.0 - kTol && c <= C + kTol))
        throw std::invalid_argument("dilate_gaps: factor out of (1, C]");
      total += c * l.length;
    } else {
      total += l.length;
    }
  }
  if (gi != factors.size())
    throw std::invalid_argument("dilate_gaps: too many factors");
  return total;
}

inline CurveFragment concatenate(const std::vector<int>& waypoints,
                                 const std::vector<CurveFragment>& parts) {
  if (parts.empty()) throw std::invalid_argument("concatenate: empty");
  if (waypoints.size() != parts.size() + 1)
    throw std::invalid_argument("concatenate: waypoint count mismatch");
  CurveFragment out;
  out.start = waypoints.front();
  out.end = waypoints.back();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].start != waypoints[i] || parts[i].end != waypoints[i + 1])
      throw std::invalid_argument("concatenate: endpoint mismatch at part " +
                                  std::to_string(i));
    for (const auto& l : parts[i].legs) out.legs.push_back(l);
  }
  out.validate();
  return out;
}

// Lemma 5.7 parameter arithmetic: a space whose pairs decompose into <= n
// waypoint hops, each (C, delta, eps)-connected at dilation L, is
// (L*C, 2*L*delta, eps * D^{log2 d - log2 L - log2 n - log2 C - 6})-connected.
struct ConnTriple {
  double C = 1.0;
  double delta = 0.0;
  double eps = 0.0;
};

inline double concat_eps_exponent(double delta, double L, double n, double C) {
  return log2d(delta) - log2d(L) - log2d(n) - log2d(C) - 6.0;
}

inline ConnTriple concat_params(double L, double C, double delta, double eps,
                                double n, double D) {
  ConnTriple t;
  t.C = L * C;
  t.delta = 2.0 * L * delta;
  t.eps = eps * std::pow(D, concat_eps_exponent(delta, L, n, C));
  return t;
}

// Trapezoid integral over solid legs; gaps carry no metric derivative and
// contribute nothing.
inline double fragment_integral(const CurveFragment& f, const ScalarField& g) {
  double s = 0.0;
  for (const auto& l : f.legs)
    if (l.kind == Leg::SOLID) s += l.length * (g[l.u] + g[l.v]) / 2.0;
  return s;
}

struct OscillationResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Lemma "lipest": |f(start)-f(end)| <= LIP * undef + integral of lip f.
inline OscillationResult oscillation_check(const Space& sp,
                                           const CurveFragment& f,
                                           const ScalarField& field,
                                           double LIP) {
  double measured = global_lipschitz(sp, field);
  if (LIP < measured - kTol)
    throw std::invalid_argument(
        "LIP below the measured global Lipschitz constant " +
        std::to_string(measured));
  OscillationResult r;
  r.lhs = std::abs(field[f.start] - field[f.end]);
  r.rhs = LIP * f.undef() + fragment_integral(f, lip_field(sp, field));
  r.holds = r.lhs <= r.rhs + kTol;
  return r;
}

// ---------------------------------------------------------------------------
// Pareto-optimal obstacle-avoiding fragment search
// ---------------------------------------------------------------------------

struct ParetoEntry {
  double len = 0.0;
  double undef = 0.0;
  CurveFragment fragment;
};

struct ParetoFront {
  std::vector<ParetoEntry> entries;  // len ascending, undef descending
  bool empty() const { return entries.empty(); }
  // Minimum undef among entries with len <= budget; kInf if none.
  double min_undef(double budget) const {
    double best = kInf;
    for (const auto& e : entries)
      if (e.len <= budget + kTol) best = std::min(best, e.undef);
    return best;
  }
  const ParetoEntry* best_for(double budget) const {
    const ParetoEntry* best = nullptr;
    for (const auto& e : entries)
      if (e.len <= budget + kTol && (!best || e.undef < best->undef - kTol))
        best = &e;
    return best;
  }
};

// Bi-objective label-setting over (len, undef).  Moves: SOLID along a graph
// edge (undef unchanged) or GAP to any vertex priced at metric distance
// (undef += distance).  Interior vertices must avoid E; the endpoints are
// exempt per Def 1.3(3).  Exact for the discrete model.
inline ParetoFront pareto_fragments(const Space& sp, int x, int y,
                                    const std::vector<char>& obstacle,
                                    double len_budget) {
  ParetoFront front;
  if (x == y) {
    CurveFragment f;
    f.start = f.end = x;
    front.entries.push_back({0.0, 0.0, std::move(f)});
    return front;
  }
  if (len_budget < sp.dist(x, y) - kTol) return front;  // infeasible

  struct Label {
    int vertex;
    double len;
    double undef;
    int parent;  // index into arena
    Leg leg;
  };
  std::vector<Label> arena;
  // Nondominated (len, undef) labels settled per vertex.
  std::vector<std::vector<std::pair<double, double>>> settled(sp.size());
  auto dominated = [&](int v, double len, double undef) {
    for (const auto& [l, u] : settled[v])
      if (l <= len + kTol && u <= undef + kTol) return true;
    return false;
  };

  using QItem = std::pair<std::pair<double, double>, int>;  // ((len,undef),arena)
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
  arena.push_back({x, 0.0, 0.0, -1, Leg{}});
  pq.push({{0.0, 0.0}, 0});

  auto blocked = [&](int v) {
    return v >= 0 && v < static_cast<int>(obstacle.size()) && obstacle[v];
  };

  std::vector<int> final_labels;
  while (!pq.empty()) {
    auto [key, idx] = pq.top();
    pq.pop();
    Label lab = arena[idx];
    if (dominated(lab.vertex, lab.len, lab.undef)) continue;
    settled[lab.vertex].push_back({lab.len, lab.undef});
    if (lab.vertex == y) final_labels.push_back(idx);
    // A label standing on an obstacle vertex can only be the terminal y.
    if (blocked(lab.vertex)) continue;
    const bool last_was_gap =
        lab.parent >= 0 && lab.leg.kind == Leg::GAP;
    // Solid moves.
    for (const auto& nb : sp.neighbors(lab.vertex)) {
      if (blocked(nb.v) && nb.v != y) continue;
      double nl = lab.len + nb.length;
      if (nl > len_budget + kTol) continue;
      if (dominated(nb.v, nl, lab.undef)) continue;
      arena.push_back({nb.v, nl, lab.undef, idx,
                       Leg{Leg::SOLID, lab.vertex, nb.v, nb.length}});
      pq.push({{nl, lab.undef}, static_cast<int>(arena.size()) - 1});
    }
    // Gap moves (skip gap-after-gap: a merged single gap dominates it).
    if (!last_was_gap) {
      const auto& row = sp.dist_row(lab.vertex);
      for (int w = 0; w < sp.size(); ++w) {
        if (w == lab.vertex) continue;
        if (blocked(w) && w != y) continue;
        double d = row[w];
        double nl = lab.len + d;
        if (nl > len_budget + kTol) continue;
        double nu = lab.undef + d;
        if (dominated(w, nl, nu)) continue;
        arena.push_back({w, nl, nu, idx, Leg{Leg::GAP, lab.vertex, w, d}});
        pq.push({{nl, nu}, static_cast<int>(arena.size()) - 1});
      }
    }
  }

  // Collect nondominated labels at y and reconstruct fragments.
  std::sort(final_labels.begin(), final_labels.end(), [&](int a, int b) {
    if (arena[a].len != arena[b].len) return arena[a].len < arena[b].len;
    return arena[a].undef < arena[b].undef;
  });
  double best_undef = kInf;
  for (int idx : final_labels) {
    const Label& lab = arena[idx];
    if (lab.undef >= best_undef - kTol) continue;
    best_undef = lab.undef;
    CurveFragment f;
    f.start = x;
    f.end = y;
    std::vector<Leg> rev;
    for (int i = idx; arena[i].parent >= 0; i = arena[i].parent)
      rev.push_back(arena[i].leg);
    f.legs.assign(rev.rbegin(), rev.rend());
    front.entries.push_back({lab.len, lab.undef, std::move(f)});
  }
  return front;
}

inline std::vector<char> obstacle_mask(const Space& sp,
                                       const std::vector<int>& E) {
  std::vector<char> m(sp.size(), 0);
  for (int v : E) m[v] = 1;
  return m;
}

// ---------------------------------------------------------------------------
// The rho test function from the Thm 1.4 proof:
//   rho(z) = inf over solid paths x -> z of len/(2B) + obstacle transit,
// where an interior vertex w in E costs (len_in + len_out)/2.  Its upper
// gradient is g = 1_E + 1/B.
// ---------------------------------------------------------------------------

struct RhoResult {
  ScalarField rho;
  ScalarField upper_gradient;
};

inline RhoResult rho_test_function(const Space& sp, int x,
                                   const std::vector<char>& E, double B) {
  if (!(B >= 1.0)) throw std::invalid_argument("rho: B >= 1 required");
  const int n = sp.size();
  auto inE = [&](int v) {
    return v < static_cast<int>(E.size()) && E[v];
  };
  // g[u]: min cost of a path x -> u where u's transit counts only the entry
  // half-edge; the exit half is charged when the path continues.
  std::vector<double> g(n, kInf);
  g[x] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, x});
  auto exit_half = [&](int u, double L) {
    return (inE(u) && u != x) ? L / 2.0 : 0.0;
  };
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > g[u] + kTol) continue;
    for (const auto& nb : sp.neighbors(u)) {
      double c = nb.length / (2.0 * B) + exit_half(u, nb.length) +
                 (inE(nb.v) ? nb.length / 2.0 : 0.0);
      if (d + c < g[nb.v] - kTol) {
        g[nb.v] = d + c;
        pq.push({g[nb.v], nb.v});
      }
    }
  }
  RhoResult res;
  res.rho.assign(n, kInf);
  res.rho[x] = 0.0;
  // Final relaxation: the destination's entry half is not charged.
  for (int u = 0; u < n; ++u) {
    if (!(g[u] < kInf)) continue;
    for (const auto& nb : sp.neighbors(u)) {
      double c = g[u] + exit_half(u, nb.length) + nb.length / (2.0 * B);
      res.rho[nb.v] = std::min(res.rho[nb.v], c);
    }
  }
  res.upper_gradient.assign(n, 1.0 / B);
  for (int v = 0; v < n; ++v)
    if (inE(v)) res.upper_gradient[v] += 1.0;
  return res;
}

}  // namespace piforge
