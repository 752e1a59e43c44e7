#pragma once

// Independent brute-force implementations used to cross-check the optimized
// algorithms on small instances: exhaustive fragment enumeration, exhaustive
// obstacle enumeration, and refined grid search for the modulus program.

#include <algorithm>
#include <functional>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/fragments.hpp"
#include "piforge/space.hpp"

namespace piforge {

// All nondominated (len, undef) values over every leg sequence from x to y
// within the budget (DFS; terminates because every leg has positive length).
// Interior vertices avoid the obstacle, endpoints exempt.
inline std::vector<std::pair<double, double>> brute_pareto(
    const Space& sp, int x, int y, const std::vector<char>& obstacle,
    double budget) {
  std::vector<std::pair<double, double>> found;
  auto blocked = [&](int v) {
    return v < static_cast<int>(obstacle.size()) && obstacle[v];
  };
  // Exact pruning: any completion from `at` has len >= len + d(at,y) and
  // undef >= undef; if an already-found solution weakly dominates every such
  // completion, the subtree cannot add a new Pareto point.
  auto subtree_dominated = [&](int at, double len, double undef) {
    double lb = len + sp.dist(at, y);
    for (const auto& [l, u] : found)
      if (l <= lb + kTol && u <= undef + kTol) return true;
    return false;
  };
  std::function<void(int, double, double)> dfs = [&](int at, double len,
                                                     double undef) {
    if (at == y) found.push_back({len, undef});
    if (blocked(at) && at != x) return;  // can stand here only as terminal
    // Solid moves.
    for (const auto& nb : sp.neighbors(at)) {
      double nl = len + nb.length;
      if (nl > budget + kTol) continue;
      if (subtree_dominated(nb.v, nl, undef)) continue;
      dfs(nb.v, nl, undef);
    }
    // Gap moves; gap-after-gap is dominated by the merged gap but is still
    // part of the search space — included for oracle completeness.
    const auto& row = sp.dist_row(at);
    for (int w = 0; w < sp.size(); ++w) {
      if (w == at) continue;
      double nl = len + row[w];
      if (nl > budget + kTol) continue;
      if (subtree_dominated(w, nl, undef + row[w])) continue;
      dfs(w, nl, undef + row[w]);
    }
  };
  if (x == y) found.push_back({0.0, 0.0});
  dfs(x, 0.0, 0.0);
  // Reduce to the Pareto set.
  std::sort(found.begin(), found.end());
  std::vector<std::pair<double, double>> pareto;
  double best_undef = kInf;
  for (const auto& [l, u] : found) {
    if (u >= best_undef - kTol) continue;
    best_undef = u;
    pareto.push_back({l, u});
  }
  return pareto;
}

inline double brute_min_undef(const Space& sp, int x, int y,
                              const std::vector<char>& obstacle,
                              double budget) {
  double best = kInf;
  for (const auto& [l, u] : brute_pareto(sp, x, y, obstacle, budget))
    if (l <= budget + kTol) best = std::min(best, u);
  return best;
}

struct BruteObstacleResult {
  std::vector<int> E;
  double min_undef = 0.0;
};

// Exhaustive adversary: every subset of B(x, Cr) \ {x,y} within the mass
// budget, evaluated against the exhaustive fragment search.
inline BruteObstacleResult brute_worst_obstacle(const Space& sp, int x, int y,
                                                double C, double eps) {
  double r = sp.dist(x, y);
  double Cr = C * r;
  double budget = eps * ball_mass(sp, x, std::max(Cr, kTol));
  std::vector<int> cands;
  {
    BallData b = ball(sp, x, std::max(Cr, kTol));
    for (int v : b.members)
      if (v != x && v != y) cands.push_back(v);
  }
  // Free blocking outside the open ball, as in the optimized adversary.
  std::vector<char> base(sp.size(), 1);
  {
    const auto& row = sp.dist_row(x);
    for (int v = 0; v < sp.size(); ++v)
      if (row[v] < Cr - kTol || row[v] < kTol) base[v] = 0;
  }
  BruteObstacleResult best;
  best.min_undef = -1.0;
  const int m = static_cast<int>(cands.size());
  for (long mask = 0; mask < (1L << m); ++mask) {
    double massE = 0.0;
    std::vector<char> obst = base;
    std::vector<int> E;
    for (int i = 0; i < m; ++i)
      if (mask & (1L << i)) {
        massE += sp.weight(cands[i]);
        obst[cands[i]] = 1;
        E.push_back(cands[i]);
      }
    if (massE > budget - kTol && mask != 0) continue;
    double mu = brute_min_undef(sp, x, y, obst, Cr);
    if (mu > best.min_undef + kTol) {
      best.min_undef = mu;
      best.E = E;
    }
  }
  return best;
}

struct GridModulusResult {
  double value = kInf;
  ScalarField rho;
  int paths = 0;
};

// Refined grid search for min avg_{B(x,s)} rho^p over densities admissible
// for every simple solid path of length <= C d(x,y).  Convexity makes the
// shrinking-box refinement converge to the optimum.
inline GridModulusResult grid_modulus(const Space& sp, int x, int y, double C,
                                      double p, double s, int steps = 9,
                                      int rounds = 12) {
  double r = sp.dist(x, y);
  double budget = C * r;
  // Enumerate simple paths within the budget (non-simple ones are implied).
  std::vector<std::vector<int>> paths;
  std::vector<int> cur = {x};
  std::vector<char> used(sp.size(), 0);
  used[x] = 1;
  std::function<void(int, double)> dfs = [&](int at, double len) {
    if (at == y) {
      paths.push_back(cur);
      return;
    }
    for (const auto& nb : sp.neighbors(at)) {
      if (used[nb.v]) continue;
      if (len + nb.length > budget + kTol) continue;
      used[nb.v] = 1;
      cur.push_back(nb.v);
      dfs(nb.v, len + nb.length);
      cur.pop_back();
      used[nb.v] = 0;
    }
  };
  dfs(x, 0.0);
  GridModulusResult res;
  res.paths = static_cast<int>(paths.size());
  if (paths.empty()) {
    res.value = 0.0;
    res.rho.assign(sp.size(), 0.0);
    return res;
  }
  // Variables: vertices on some path.
  std::vector<int> vars;
  {
    std::vector<char> on(sp.size(), 0);
    for (const auto& P : paths)
      for (int v : P) on[v] = 1;
    for (int v = 0; v < sp.size(); ++v)
      if (on[v]) vars.push_back(v);
  }
  // Closed-ball normalization, matching the cutting-plane solver.
  std::vector<double> a(sp.size(), 0.0);
  {
    const auto& row = sp.dist_row(x);
    double mass = 0.0;
    for (int v = 0; v < sp.size(); ++v)
      if (row[v] <= s + kTol) mass += sp.weight(v);
    for (int v = 0; v < sp.size(); ++v)
      if (row[v] <= s + kTol) a[v] = sp.weight(v) / mass;
  }

  auto path_integral = [&](const std::vector<int>& P, const ScalarField& rho) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
      double L = sp.dist(P[i], P[i + 1]);
      for (const auto& nb : sp.neighbors(P[i]))
        if (nb.v == P[i + 1]) {
          L = nb.length;
          break;
        }
      sum += L * (rho[P[i]] + rho[P[i + 1]]) / 2.0;
    }
    return sum;
  };

  const int nv = static_cast<int>(vars.size());
  std::vector<double> lo(nv, 0.0), hi(nv, 4.0 / std::max(r, kTol));
  ScalarField best_rho(sp.size(), 0.0);
  double best_val = kInf;
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> idx(nv, 0);
    ScalarField rho(sp.size(), 0.0);
    bool carry = false;
    while (!carry) {
      for (int i = 0; i < nv; ++i)
        rho[vars[i]] =
            lo[i] + (hi[i] - lo[i]) * idx[i] / std::max(1, steps - 1);
      bool feasible = true;
      for (const auto& P : paths)
        if (path_integral(P, rho) < 1.0 - kTol) {
          feasible = false;
          break;
        }
      if (feasible) {
        double val = 0.0;
        for (int v : vars) val += a[v] * std::pow(rho[v], p);
        if (val < best_val) {
          best_val = val;
          best_rho = rho;
        }
      }
      // Advance the multi-index.
      carry = true;
      for (int i = 0; i < nv; ++i) {
        if (++idx[i] < steps) {
          carry = false;
          break;
        }
        idx[i] = 0;
      }
    }
    // Shrink each box around the incumbent.
    for (int i = 0; i < nv; ++i) {
      double span = (hi[i] - lo[i]) / 2.0;
      double center = best_rho[vars[i]];
      lo[i] = std::max(0.0, center - span / 2.0);
      hi[i] = center + span / 2.0;
    }
  }
  res.value = best_val;
  res.rho = best_rho;
  return res;
}

}  // namespace piforge
