#pragma once

// Nested separated nets, Whitney-style gap-point covers, and Vitali
// selection: the combinatorial inputs to the thickening construction.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/space.hpp"

namespace piforge {

struct NetHierarchy {
  // levels[j] = N_j, a maximal 2^{-j}-separated subset of K; nested.
  std::vector<std::vector<int>> levels;
  // scale[v] = 2^{-i} for v in N_i \ N_{i-1}; absent if v is in no net.
  std::map<int, double> scale;

  bool contains(int j, int v) const {
    const auto& L = levels[j];
    return std::binary_search(L.begin(), L.end(), v);
  }
};

// Greedy maximal nets in ascending vertex-id order, seeded with the previous
// level so N_j is a superset of N_{j-1}.
inline NetHierarchy build_nets(const Space& sp, const std::vector<int>& K,
                               int j_max) {
  if (K.empty()) throw std::invalid_argument("build_nets: K empty");
  std::vector<int> Ksorted = K;
  std::sort(Ksorted.begin(), Ksorted.end());
  NetHierarchy nets;
  std::vector<int> prev;
  for (int j = 0; j <= j_max; ++j) {
    double sep = std::pow(2.0, -j);
    std::vector<int> level = prev;  // nesting: keep the coarser net
    for (int v : Ksorted) {
      bool ok = true;
      for (int m : level)
        if (m != v && sp.dist(v, m) < sep - kTol) {
          ok = false;
          break;
        }
      if (ok && std::find(level.begin(), level.end(), v) == level.end())
        level.push_back(v);
    }
    std::sort(level.begin(), level.end());
    for (int v : level)
      if (!nets.scale.count(v)) nets.scale[v] = sep;
    nets.levels.push_back(level);
    prev = std::move(level);
  }
  return nets;
}

struct GapPoint {
  int vertex = 0;
  int k = 0;        // annulus scale index
  double scale = 0;  // 2^{-k}
  double dist_K = 0;
};

struct GapPointSet {
  std::vector<GapPoint> points;  // all selected gap points, every scale
  bool covering_ok = true;       // whitneycover re-verified

  std::vector<GapPoint> at_scale(int k) const {
    std::vector<GapPoint> out;
    for (const auto& g : points)
      if (g.k == k) out.push_back(g);
    return out;
  }
};

struct BallSpec {
  int id = 0;
  int center = 0;
  double radius = 0.0;
};

// Greedy Vitali selection: descending radius, ties by ascending id.  The
// selected balls are pairwise disjoint and every input ball intersects a
// selected ball of at least its radius.
inline std::vector<BallSpec> vitali_select(const Space& sp,
                                           std::vector<BallSpec> balls) {
  for (const auto& b : balls)
    if (!(b.radius > 0.0))
      throw std::invalid_argument("vitali_select: nonpositive radius");
  std::sort(balls.begin(), balls.end(), [](const BallSpec& a,
                                           const BallSpec& b) {
    if (a.radius != b.radius) return a.radius > b.radius;
    return a.id < b.id;
  });
  std::vector<BallSpec> selected;
  for (const auto& b : balls) {
    bool disjoint = true;
    for (const auto& s : selected)
      if (sp.dist(b.center, s.center) < b.radius + s.radius - kTol) {
        disjoint = false;
        break;
      }
    if (disjoint) selected.push_back(b);
  }
  return selected;
}

// Gap points near K inside A: per scale k the candidates are points of
// (N_1(K) \ K) ∩ A with 2^{-k-1} < d(g,K) <= 2^{-k}; a Vitali pass at
// radius 2^{-k-15} enforces global disjointness (coarse scales first), and
// the 2^{-k-10}-cover of every candidate is then re-verified.
inline GapPointSet build_gap_points(const Space& sp, const std::vector<int>& K,
                                    const std::vector<int>& A) {
  std::vector<char> inK(sp.size(), 0);
  for (int v : K) {
    if (v < 0 || v >= sp.size())
      throw std::invalid_argument("build_gap_points: K out of range");
    inK[v] = 1;
  }
  for (int v : A)
    if (v < 0 || v >= sp.size())
      throw std::invalid_argument("build_gap_points: A out of range");
  {
    std::vector<char> inA(sp.size(), 0);
    for (int v : A) inA[v] = 1;
    for (int v : K)
      if (!inA[v]) throw std::invalid_argument("build_gap_points: K not in A");
  }

  struct Cand {
    int vertex;
    int k;
    double dist_K;
  };
  std::vector<Cand> cands;
  int k_min = 1 << 30, k_max = -(1 << 30);
  for (int v : A) {
    if (inK[v]) continue;
    double d = kInf;
    for (int u : K) d = std::min(d, sp.dist(v, u));
    // N_1(K): within distance 1 of K (after any caller-side rescaling).
    if (!(d <= 1.0 + kTol) || !(d > 0.0)) continue;
    // Scale index: 2^{-k-1} < d <= 2^{-k}  =>  k = ceil(-log2 d) - ... pick
    // the unique integer with d in (2^{-k-1}, 2^{-k}].
    int k = static_cast<int>(std::floor(-std::log2(d) + kTol));
    if (!(d <= std::pow(2.0, -k) + kTol &&
          d > std::pow(2.0, -k - 1) + kTol)) {
      // floating-point edge: nudge k
      if (d <= std::pow(2.0, -k - 1) + kTol) ++k;
      else if (d > std::pow(2.0, -k) + kTol) --k;
    }
    if (k < 0) continue;  // d in (1/2, 1] has k = 0; d > 1 excluded above
    cands.push_back({v, k, d});
    k_min = std::min(k_min, k);
    k_max = std::max(k_max, k);
  }
  GapPointSet out;
  if (cands.empty()) return out;

  // Coarse-to-fine Vitali with disjointness enforced across all scales.
  std::vector<GapPoint> selected;
  for (int k = k_min; k <= k_max; ++k) {
    double rad = std::pow(2.0, -k - 15);
    std::vector<Cand> level;
    for (const auto& c : cands)
      if (c.k == k) level.push_back(c);
    std::sort(level.begin(), level.end(),
              [](const Cand& a, const Cand& b) { return a.vertex < b.vertex; });
    for (const auto& c : level) {
      bool disjoint = true;
      for (const auto& s : selected) {
        double srad = std::pow(2.0, -s.k - 15);
        if (sp.dist(c.vertex, s.vertex) < rad + srad - kTol) {
          disjoint = false;
          break;
        }
      }
      if (disjoint)
        selected.push_back({c.vertex, c.k, std::pow(2.0, -c.k), c.dist_K});
    }
  }
  out.points = std::move(selected);

  // Covering invariant: every candidate lies within 2^{-k-10} of a selected
  // gap point at a scale no finer than its own.
  for (const auto& c : cands) {
    bool covered = false;
    for (const auto& g : out.points)
      if (g.k <= c.k &&
          sp.dist(c.vertex, g.vertex) <= std::pow(2.0, -g.k - 10) + kTol) {
        covered = true;
        break;
      }
    if (!covered) {
      out.covering_ok = false;
      break;
    }
  }
  if (!out.covering_ok)
    throw std::logic_error("build_gap_points: covering invariant violated");
  return out;
}

}  // namespace piforge
