#pragma once

// Finite metric measure spaces with ball queries, doubling, perfectness,
// density, averaging, and maximal-function primitives.
//
// Measures are purely atomic (one weight per vertex); the metric is either
// generated by shortest paths on a weighted graph or given as an explicit
// matrix.  Balls are open: members = {y : d(c,y) < r}.  Suprema over
// continuous radii are evaluated on the finite set of critical radii
// (distinct pairwise distances plus their halves), which is exact for atomic
// measures.

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "piforge/core.hpp"

namespace piforge {

using ScalarField = std::vector<double>;

struct GraphEdge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

class Space {
 public:
  Space() = default;

  // Graph-generated metric.
  Space(std::vector<double> weights, std::vector<GraphEdge> edges,
        double resolution, double scale_cap)
      : weights_(std::move(weights)),
        resolution_(resolution),
        scale_cap_(scale_cap),
        from_matrix_(false) {
    validate_weights();
    adjacency_.assign(weights_.size(), {});
    for (const auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= size() || e.v >= size())
        throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop edge");
      if (!(e.length > 0.0))
        throw std::invalid_argument("edge " + std::to_string(e.u) + "-" +
                                    std::to_string(e.v) +
                                    ": length must be positive");
      adjacency_[e.u].push_back({e.v, e.length});
      adjacency_[e.v].push_back({e.u, e.length});
      edges_.push_back(e);
    }
    if (size() <= kDenseCacheLimit) {
      rows_.resize(size());
      for (int i = 0; i < size(); ++i) rows_[i] = dijkstra(i);
      check_connected();
    }
  }

  // Explicit-matrix metric.  Every vertex pair counts as a graph edge for
  // operations that traverse edges (SOLID legs, lip fields).
  Space(std::vector<double> weights, std::vector<std::vector<double>> matrix,
        double resolution, double scale_cap)
      : weights_(std::move(weights)),
        resolution_(resolution),
        scale_cap_(scale_cap),
        from_matrix_(true) {
    validate_weights();
    const int n = size();
    if (static_cast<int>(matrix.size()) != n)
      throw std::invalid_argument("matrix size mismatch");
    for (const auto& row : matrix)
      if (static_cast<int>(row.size()) != n)
        throw std::invalid_argument("matrix row size mismatch");
    for (int i = 0; i < n; ++i) {
      if (std::abs(matrix[i][i]) > kTol)
        throw std::invalid_argument("matrix diagonal must be zero");
      for (int j = 0; j < n; ++j) {
        if (i != j && !(matrix[i][j] > 0.0))
          throw std::invalid_argument("matrix off-diagonal must be positive");
        if (std::abs(matrix[i][j] - matrix[j][i]) > kTol)
          throw std::invalid_argument("matrix must be symmetric");
      }
    }
    // Exhaustive triangle-inequality scan with witness.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (matrix[i][j] > matrix[i][k] + matrix[k][j] + kTol)
            throw std::invalid_argument(
                "triangle inequality violated at (" + std::to_string(i) + "," +
                std::to_string(j) + "," + std::to_string(k) + ")");
    rows_ = std::move(matrix);
    adjacency_.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        adjacency_[i].push_back({j, rows_[i][j]});
        adjacency_[j].push_back({i, rows_[i][j]});
        edges_.push_back({i, j, rows_[i][j]});
      }
  }

  int size() const { return static_cast<int>(weights_.size()); }
  double weight(int v) const { return weights_[v]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }
  double resolution() const { return resolution_; }
  double scale_cap() const { return scale_cap_; }
  bool from_matrix() const { return from_matrix_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  struct Neighbor {
    int v;
    double length;
  };
  const std::vector<Neighbor>& neighbors(int v) const { return adjacency_[v]; }

  const std::vector<double>& dist_row(int u) const {
    if (!rows_.empty()) return rows_[u];
    auto it = row_cache_.find(u);
    if (it == row_cache_.end())
      it = row_cache_.emplace(u, dijkstra(u)).first;
    return it->second;
  }
  double dist(int u, int v) const { return dist_row(u)[v]; }

  double diameter() const {
    double d = 0.0;
    for (int i = 0; i < size(); ++i)
      d = std::max(d, *std::max_element(dist_row(i).begin(),
                                        dist_row(i).end()));
    return d;
  }

  // Distinct positive pairwise distances, ascending.  Expensive on large
  // spaces; callers on big instances restrict to per-center variants.
  std::vector<double> critical_distances(double cap = kInf) const {
    std::set<double> s;
    for (int i = 0; i < size(); ++i)
      for (double d : dist_row(i))
        if (d > 0.0 && d <= cap + kTol) s.insert(d);
    return {s.begin(), s.end()};
  }

  std::vector<double> critical_distances_from(int x, double cap = kInf) const {
    std::set<double> s;
    for (double d : dist_row(x))
      if (d > 0.0 && d <= cap + kTol) s.insert(d);
    return {s.begin(), s.end()};
  }

 private:
  static constexpr int kDenseCacheLimit = 4096;

  void validate_weights() {
    if (weights_.empty()) throw std::invalid_argument("space must be nonempty");
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (!(weights_[i] > 0.0))
        throw std::invalid_argument("vertex " + std::to_string(i) +
                                    ": weight must be positive");
  }

  void check_connected() const {
    for (double d : rows_[0])
      if (!(d < kInf))
        throw std::invalid_argument("graph metric is not finite (disconnected)");
  }

  std::vector<double> dijkstra(int src) const {
    std::vector<double> dist(size(), kInf);
    dist[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (const auto& nb : adjacency_[u]) {
        double nd = d + nb.length;
        if (nd < dist[nb.v]) {
          dist[nb.v] = nd;
          pq.push({nd, nb.v});
        }
      }
    }
    return dist;
  }

  std::vector<double> weights_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<double>> rows_;           // dense distance cache
  mutable std::map<int, std::vector<double>> row_cache_;  // lazy rows
  double resolution_ = 1.0;
  double scale_cap_ = 1.0;
  bool from_matrix_ = false;
};

struct BallData {
  int center = 0;
  double radius = 0.0;
  std::vector<int> members;
  double mass = 0.0;
};

// Open ball: members = {y : d(center,y) < r}.
inline BallData ball(const Space& sp, int center, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  BallData b;
  b.center = center;
  b.radius = r;
  const auto& row = sp.dist_row(center);
  for (int v = 0; v < sp.size(); ++v)
    if (row[v] < r - kTol || row[v] < kTol) {
      b.members.push_back(v);
      b.mass += sp.weight(v);
    }
  return b;
}

// Mass of the open ball without materializing members.
inline double ball_mass(const Space& sp, int center, double r) {
  double m = 0.0;
  const auto& row = sp.dist_row(center);
  for (int v = 0; v < sp.size(); ++v)
    if (row[v] < r - kTol || row[v] < kTol) m += sp.weight(v);
  return m;
}

// sup over x in `along`, r in `radii` (plus critical radii: distinct
// pairwise distances <= r0 and their halves) of mu(B(x,2r))/mu(B(x,r)).
inline double doubling_constant(const Space& sp, std::vector<double> radii,
                                const std::vector<int>& along) {
  if (along.empty()) throw std::invalid_argument("empty 'along' set");
  const double r0 = sp.scale_cap();
  for (double r : radii)
    if (!(r > 0.0) || r > r0 + kTol)
      throw std::invalid_argument("radius outside (0, r0]");
  // For very large spaces restrict the critical set to distances seen from
  // the sample centers; exact for the supremum over those centers.
  std::set<double> cand(radii.begin(), radii.end());
  cand.insert(r0);
  for (int x : along)
    for (double d : sp.critical_distances_from(x, 2.0 * r0)) {
      if (d <= r0 + kTol) cand.insert(std::min(d, r0));
      if (d / 2.0 <= r0 + kTol) cand.insert(d / 2.0);
    }
  double best = 1.0;
  for (int x : along) {
    const auto& row = sp.dist_row(x);
    // Sort distances once per center; evaluate each candidate radius by
    // prefix mass with strict < thresholds.
    std::vector<std::pair<double, double>> dw(sp.size());
    for (int v = 0; v < sp.size(); ++v) dw[v] = {row[v], sp.weight(v)};
    std::sort(dw.begin(), dw.end());
    std::vector<double> prefix(dw.size() + 1, 0.0);
    for (std::size_t i = 0; i < dw.size(); ++i)
      prefix[i + 1] = prefix[i] + dw[i].second;
    auto open_mass = [&](double r) {
      // mass of {d < r} with tolerance
      std::size_t lo = 0, hi = dw.size();
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (dw[mid].first < r - kTol)
          lo = mid + 1;
        else
          hi = mid;
      }
      return prefix[lo];
    };
    for (double r : cand) {
      double den = open_mass(r);
      if (den <= 0.0) den = sp.weight(x);  // center always a member
      double num = std::max(open_mass(2.0 * r), den);
      best = std::max(best, num / den);
    }
  }
  return best;
}

inline double doubling_constant(const Space& sp) {
  std::vector<int> all(sp.size());
  std::iota(all.begin(), all.end(), 0);
  return doubling_constant(sp, {sp.scale_cap()}, all);
}

// Hardy-Littlewood maximal function at scale s: M_s f(x) = sup over balls
// B(y,r) with r < s containing x of the ball average of |f|.
inline ScalarField maximal_function(const Space& sp, const ScalarField& f,
                                    double s) {
  if (!(s > 0.0)) throw std::invalid_argument("scale s must be positive");
  const int n = sp.size();
  ScalarField out(n, 0.0);
  std::vector<int> order(n);
  for (int y = 0; y < n; ++y) {
    const auto& row = sp.dist_row(y);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return row[a] < row[b]; });
    // Prefix sums over the distance ordering; prefix k realizes the open
    // ball with members {v : d(y,v) <= row[order[k]]}, admissible when that
    // threshold is < s (then some radius r in (threshold, s) exists).
    std::vector<double> avg;  // avg over prefix ending at rank k
    avg.reserve(n);
    double wsum = 0.0, fsum = 0.0;
    int kmax = -1;
    for (int k = 0; k < n; ++k) {
      int v = order[k];
      wsum += sp.weight(v);
      fsum += sp.weight(v) * std::abs(f[v]);
      // Extend to the full tie group before recording the ball.
      if (k + 1 < n && std::abs(row[order[k + 1]] - row[v]) <= kTol) {
        avg.push_back(-kInf);  // not a ball boundary; placeholder
        continue;
      }
      if (row[v] < s - kTol) {
        avg.push_back(fsum / wsum);
        kmax = k;
      } else {
        avg.push_back(-kInf);
      }
    }
    if (kmax < 0) continue;
    // Suffix max of avg over k; member at rank i belongs to all prefixes
    // with k >= i.
    std::vector<double> sufmax(kmax + 2, -kInf);
    for (int k = kmax; k >= 0; --k)
      sufmax[k] = std::max(sufmax[k + 1], avg[k]);
    for (int i = 0; i <= kmax; ++i)
      out[order[i]] = std::max(out[order[i]], sufmax[i]);
  }
  return out;
}

// mu-average over the ball of |f - a|.
inline double ball_average(const Space& sp, const ScalarField& f,
                           const BallData& b) {
  double s = 0.0;
  for (int v : b.members) s += sp.weight(v) * f[v];
  return s / b.mass;
}

inline double mean_deviation(const Space& sp, const ScalarField& f,
                             const BallData& b, double a) {
  if (b.members.empty()) throw std::invalid_argument("empty ball");
  double s = 0.0;
  for (int v : b.members) s += sp.weight(v) * std::abs(f[v] - a);
  return s / b.mass;
}

inline double mean_deviation_from_mean(const Space& sp, const ScalarField& f,
                                       const BallData& b) {
  return mean_deviation(sp, f, b, ball_average(sp, f, b));
}

struct PerfectnessResult {
  bool fails = false;
  double L = 1.0;
  std::string witness;
};

// Smallest L >= 1 such that for all x in S and r in (resolution, r0) with
// B(x,r0)\B(x,r) nonempty, also B(x,r)\B(x,r/L) is nonempty.  Radii at or
// below the resolution are excluded: every atom is isolated below that scale.
inline PerfectnessResult uniform_perfectness(const Space& sp,
                                             const std::vector<int>& S,
                                             double r0) {
  if (S.empty()) throw std::invalid_argument("empty S");
  PerfectnessResult res;
  const double h = sp.resolution();
  for (int x : S) {
    auto t = sp.critical_distances_from(x);  // ascending, positive
    double dstar = 0.0;  // largest distance < r0 (supplies exterior points)
    for (double d : t)
      if (d < r0 - kTol) dstar = d;
    if (dstar <= 0.0) continue;  // no exterior witness at any r: vacuous
    // k = 0 band: radii in (h, t[0]] have B(x,r) = {x}; if any such radius
    // also has a nonempty exterior, no finite L works.
    if (!t.empty() && t[0] > h + kTol && std::min(t[0], dstar) > h + kTol) {
      res.fails = true;
      res.witness = "x=" + std::to_string(x) +
                    " r=" + std::to_string(std::min(t[0], dstar)) +
                    " ball is the isolated atom";
      return res;
    }
    for (std::size_t k = 0; k + 1 <= t.size(); ++k) {
      if (k + 1 >= t.size()) break;
      double lo = t[k], hi = t[k + 1];
      double rmax = std::min(hi, dstar);
      if (rmax <= lo + kTol || rmax <= h + kTol) continue;
      double need = rmax / lo;
      if (need > res.L) {
        res.L = need;
        res.witness = "x=" + std::to_string(x) + " r=" + std::to_string(rmax);
      }
    }
  }
  return res;
}

// Discrete pointwise Lipschitz surrogate: lip f(v) = max over graph
// neighbors u of |f(v)-f(u)|/length(v,u); isolated vertices get 0.
inline ScalarField lip_field(const Space& sp, const ScalarField& f) {
  ScalarField out(sp.size(), 0.0);
  for (int v = 0; v < sp.size(); ++v)
    for (const auto& nb : sp.neighbors(v))
      out[v] = std::max(out[v], std::abs(f[v] - f[nb.v]) / nb.length);
  return out;
}

// Measured global Lipschitz constant max |f(u)-f(v)|/d(u,v).
inline double global_lipschitz(const Space& sp, const ScalarField& f) {
  double L = 0.0;
  for (int u = 0; u < sp.size(); ++u) {
    const auto& row = sp.dist_row(u);
    for (int v = u + 1; v < sp.size(); ++v)
      if (row[v] > 0.0) L = std::max(L, std::abs(f[u] - f[v]) / row[v]);
  }
  return L;
}

// Subset of A whose every open ball of radius < r0 meets the density bound
// mu(B∩A)/mu(B) >= 1-eps.
inline std::vector<int> density_points(const Space& sp,
                                       const std::vector<int>& A, double eps,
                                       double r0) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must be in (0,1)");
  std::vector<char> inA(sp.size(), 0);
  for (int v : A) inA[v] = 1;
  std::vector<int> out;
  for (int x : A) {
    const auto& row = sp.dist_row(x);
    auto t = sp.critical_distances_from(x);
    bool ok = true;
    std::vector<double> thresholds = {0.0};
    for (double d : t)
      if (d < r0 - kTol) thresholds.push_back(d);
    for (double th : thresholds) {
      double mass = 0.0, massA = 0.0;
      for (int v = 0; v < sp.size(); ++v)
        if (row[v] <= th + kTol) {
          mass += sp.weight(v);
          if (inA[v]) massA += sp.weight(v);
        }
      if (massA / mass < 1.0 - eps - kTol) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace piforge
