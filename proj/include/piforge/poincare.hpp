#pragma once

// Poincare-inequality estimation, p-modulus with cutting planes, the
// non-homogeneous (Phi,Psi,C) forms, and Muckenhoupt A-infinity weights.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/fragments.hpp"
#include "piforge/space.hpp"

namespace piforge {

// ---------------------------------------------------------------------------
// pi_scan
// ---------------------------------------------------------------------------

struct NamedField {
  std::string name;
  ScalarField values;
};

struct PoincareReport {
  double p = 1.0;
  double C = 1.0;
  std::vector<double> radii;
  double C_PI_hat = 0.0;  // empirical sup of lhs / (r * rhs-average)
  std::string worst_witness;
  bool zero_gradient_violation = false;
  std::string violation_witness;
  long evaluations = 0;
};

// Function family generators for the scan: distance fields d(.,S) for
// seeded random S, and random 1-Lipschitz fields built by inf-convolution
// smoothing of random seeds, f(v) = min_u (seed(u) + d(u,v)).
inline std::vector<NamedField> default_function_family(const Space& sp,
                                                       int count,
                                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NamedField> fam;
  const int n = sp.size();
  // Coordinate-like field: distance to a fixed vertex.
  {
    NamedField f{"dist-to-0", ScalarField(n)};
    const auto& row = sp.dist_row(0);
    for (int v = 0; v < n; ++v) f.values[v] = row[v];
    fam.push_back(std::move(f));
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> unif(0.0, sp.diameter());
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      // d(., S) for a random small S.
      int k = 1 + static_cast<int>(rng() % 3);
      std::vector<int> S;
      for (int j = 0; j < k; ++j) S.push_back(pick(rng));
      NamedField f{"dist-to-set-" + std::to_string(i), ScalarField(n, kInf)};
      for (int v = 0; v < n; ++v)
        for (int s : S) f.values[v] = std::min(f.values[v], sp.dist(v, s));
      fam.push_back(std::move(f));
    } else {
      // Inf-convolution of a random seed: always 1-Lipschitz.
      ScalarField seedf(n);
      for (int v = 0; v < n; ++v) seedf[v] = unif(rng);
      NamedField f{"infconv-" + std::to_string(i), ScalarField(n, kInf)};
      for (int v = 0; v < n; ++v) {
        const auto& row = sp.dist_row(v);
        for (int u = 0; u < n; ++u)
          f.values[v] = std::min(f.values[v], seedf[u] + row[u]);
      }
      fam.push_back(std::move(f));
    }
  }
  return fam;
}

// Worst ratio of avg_B|f - f_B| against r * (avg_{B(x,Cr)} (lip f)^p)^{1/p}
// over all centers, the given radii, and the function family.  The result is
// an empirical sup: a lower estimate of the true constant.
inline PoincareReport pi_scan(const Space& sp, double p, double C,
                              const std::vector<NamedField>& family,
                              const std::vector<double>& radii,
                              const std::vector<int>& centers = {}) {
  if (family.empty()) throw std::invalid_argument("pi_scan: empty family");
  PoincareReport rep;
  rep.p = p;
  rep.C = C;
  rep.radii = radii;
  std::vector<int> cs = centers;
  if (cs.empty()) {
    cs.resize(sp.size());
    std::iota(cs.begin(), cs.end(), 0);
  }
  std::vector<ScalarField> lips;
  lips.reserve(family.size());
  for (const auto& f : family) lips.push_back(lip_field(sp, f.values));
  for (int x : cs) {
    for (double r : radii) {
      if (r > sp.scale_cap() + kTol) continue;
      BallData b = ball(sp, x, r);
      BallData cb = ball(sp, x, C * r);
      for (std::size_t fi = 0; fi < family.size(); ++fi) {
        ++rep.evaluations;
        double lhs = mean_deviation_from_mean(sp, family[fi].values, b);
        double gp = 0.0;
        for (int v : cb.members)
          gp += sp.weight(v) * std::pow(lips[fi][v], p);
        double rhs = r * std::pow(gp / cb.mass, 1.0 / p);
        if (rhs <= kTol) {
          if (lhs > kTol) {
            rep.zero_gradient_violation = true;
            rep.violation_witness = "x=" + std::to_string(x) +
                                    " r=" + std::to_string(r) + " f=" +
                                    family[fi].name;
          }
          continue;
        }
        double ratio = lhs / rhs;
        if (ratio > rep.C_PI_hat) {
          rep.C_PI_hat = ratio;
          rep.worst_witness = "x=" + std::to_string(x) +
                              " r=" + std::to_string(r) + " f=" +
                              family[fi].name;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// p-modulus via cutting planes
// ---------------------------------------------------------------------------

struct ModulusPath {
  std::vector<int> vertices;  // solid path x -> y
  double length = 0.0;
  double integral = 0.0;  // trapezoid integral of rho at the optimum
};

struct ModulusResult {
  double value = 0.0;  // Mod_p^{x,s}(Gamma_{x,y,C})
  ScalarField rho;
  std::vector<ModulusPath> active_paths;
  bool feasible = true;       // some admissible path exists
  int iterations = 0;
  double worst_slack = 0.0;   // min path integral - 1 at the optimum
};

namespace detail {

// Min-cost solid path x -> y with length <= budget; cost per edge is
// len * (price(u)+price(v))/2 (the trapezoid rule shared with fragments).
// Bi-objective label setting over (cost, length).
inline ModulusPath budgeted_min_cost_path(const Space& sp, int x, int y,
                                          const ScalarField& price,
                                          double budget) {
  struct Label {
    int vertex;
    double cost, len;
    int parent;
  };
  std::vector<Label> arena;
  std::vector<std::vector<std::pair<double, double>>> settled(sp.size());
  auto dominated = [&](int v, double cost, double len) {
    for (const auto& [c, l] : settled[v])
      if (c <= cost + kTol && l <= len + kTol) return true;
    return false;
  };
  using QItem = std::pair<std::pair<double, double>, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
  arena.push_back({x, 0.0, 0.0, -1});
  pq.push({{0.0, 0.0}, 0});
  int best = -1;
  while (!pq.empty()) {
    auto [key, idx] = pq.top();
    pq.pop();
    Label lab = arena[idx];
    if (dominated(lab.vertex, lab.cost, lab.len)) continue;
    settled[lab.vertex].push_back({lab.cost, lab.len});
    if (lab.vertex == y && best < 0) {
      best = idx;
      break;  // first settled label at y has minimum cost
    }
    for (const auto& nb : sp.neighbors(lab.vertex)) {
      double nl = lab.len + nb.length;
      if (nl > budget + kTol) continue;
      double nc =
          lab.cost + nb.length * (price[lab.vertex] + price[nb.v]) / 2.0;
      if (dominated(nb.v, nc, nl)) continue;
      arena.push_back({nb.v, nc, nl, idx});
      pq.push({{nc, nl}, static_cast<int>(arena.size()) - 1});
    }
  }
  ModulusPath path;
  if (best < 0) return path;  // empty vertices = infeasible
  for (int i = best; i >= 0; i = arena[i].parent)
    path.vertices.push_back(arena[i].vertex);
  std::reverse(path.vertices.begin(), path.vertices.end());
  path.length = arena[best].len;
  path.integral = arena[best].cost;
  return path;
}

inline double path_integral(const Space& sp, const std::vector<int>& verts,
                            const ScalarField& rho) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    double L = sp.dist(verts[i], verts[i + 1]);
    for (const auto& nb : sp.neighbors(verts[i]))
      if (nb.v == verts[i + 1]) {
        L = nb.length;
        break;
      }
    s += L * (rho[verts[i]] + rho[verts[i + 1]]) / 2.0;
  }
  return s;
}

}  // namespace detail

// Mod_p^{x,s}(Gamma_{x,y,C}): min avg_{B(x,s)} rho^p over densities with
// trapezoid integral >= 1 on every solid path of length <= C d(x,y).
// Cutting-plane loop: the restricted convex program is solved by dual
// coordinate ascent on the discovered path constraints (KKT closed form
// plus bisection per multiplier); the separation oracle is the budgeted
// min-cost path above.  Stops when no path violates by more than 1e-6.
inline ModulusResult modulus(const Space& sp, int x, int y, double C, double p,
                             double s, int max_cuts = 256) {
  if (!(p > 1.0)) throw std::invalid_argument("modulus: p > 1 required");
  double r = sp.dist(x, y);
  if (s < C * r - kTol)
    throw std::invalid_argument("modulus: need s >= C*d(x,y)");
  ModulusResult res;
  const int n = sp.size();
  res.rho.assign(n, 0.0);

  // Normalization set: closed ball of radius s, so endpoints at distance
  // exactly s = C d(x,y) are still charged by the objective (otherwise the
  // program degenerates: a free endpoint absorbs the whole constraint).
  std::vector<int> norm_members;
  double norm_mass = 0.0;
  {
    const auto& row = sp.dist_row(x);
    for (int v = 0; v < n; ++v)
      if (row[v] <= s + kTol) {
        norm_members.push_back(v);
        norm_mass += sp.weight(v);
      }
  }
  std::vector<double> a(n, 0.0);
  for (int v : norm_members) a[v] = sp.weight(v) / norm_mass;

  {
    ScalarField zero(n, 0.0);
    auto probe = detail::budgeted_min_cost_path(sp, x, y, zero, C * r);
    if (probe.vertices.empty()) {
      res.feasible = false;
      res.value = 0.0;
      return res;
    }
  }

  std::vector<std::vector<int>> paths;
  std::vector<double> lambda;

  auto rebuild_rho = [&]() {
    // KKT: p * a_v * rho_v^{p-1} = sum_P lambda_P c_{P,v}, where c_{P,v} is
    // the trapezoid coefficient of v on path P.
    std::vector<double> force(n, 0.0);
    for (std::size_t pi = 0; pi < paths.size(); ++pi) {
      const auto& verts = paths[pi];
      for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        double L = sp.dist(verts[i], verts[i + 1]);
        for (const auto& nb : sp.neighbors(verts[i]))
          if (nb.v == verts[i + 1]) {
            L = nb.length;
            break;
          }
        force[verts[i]] += lambda[pi] * L / 2.0;
        force[verts[i + 1]] += lambda[pi] * L / 2.0;
      }
    }
    for (int v = 0; v < n; ++v) {
      if (a[v] <= 0.0) {
        // Outside the normalization ball: free to be as large as needed;
        // cap at a value that satisfies any constraint on its own.
        res.rho[v] = force[v] > 0.0 ? 2.0 / std::max(sp.resolution(), kTol)
                                    : 0.0;
        continue;
      }
      res.rho[v] = std::pow(force[v] / (p * a[v]), 1.0 / (p - 1.0));
    }
  };

  for (res.iterations = 0; res.iterations < max_cuts; ++res.iterations) {
    // Dual coordinate ascent: cycle multipliers, setting each so its path
    // constraint is active (integral == 1); monotone in lambda, bisection.
    for (int sweep = 0; sweep < 400 && !paths.empty(); ++sweep) {
      double moved = 0.0;
      for (std::size_t pi = 0; pi < paths.size(); ++pi) {
        double old = lambda[pi];
        double lo = 0.0, hi = std::max(1.0, lambda[pi]);
        // Grow hi until the constraint is satisfied.
        for (int grow = 0; grow < 80; ++grow) {
          lambda[pi] = hi;
          rebuild_rho();
          if (detail::path_integral(sp, paths[pi], res.rho) >= 1.0) break;
          hi *= 2.0;
        }
        // Smallest multiplier restoring the constraint: either 0 (slack)
        // or the active value — complementary slackness in one sweep step.
        for (int it = 0; it < 60; ++it) {
          double mid = (lo + hi) / 2.0;
          lambda[pi] = mid;
          rebuild_rho();
          if (detail::path_integral(sp, paths[pi], res.rho) >= 1.0)
            hi = mid;
          else
            lo = mid;
        }
        lambda[pi] = hi;
        rebuild_rho();
        moved = std::max(moved, std::abs(lambda[pi] - old));
      }
      if (moved < 1e-11) break;
    }
    // Separation.
    auto cut = detail::budgeted_min_cost_path(sp, x, y, res.rho, C * r);
    if (cut.vertices.empty()) break;
    res.worst_slack = cut.integral - 1.0;
    if (cut.integral >= 1.0 - 1e-6) break;
    paths.push_back(cut.vertices);
    lambda.push_back(0.0);
  }

  res.value = 0.0;
  for (int v : norm_members) res.value += a[v] * std::pow(res.rho[v], p);
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    ModulusPath mp;
    mp.vertices = paths[pi];
    mp.integral = detail::path_integral(sp, paths[pi], res.rho);
    for (std::size_t i = 0; i + 1 < paths[pi].size(); ++i)
      mp.length += sp.dist(paths[pi][i], paths[pi][i + 1]);
    res.active_paths.push_back(std::move(mp));
  }
  return res;
}

// Lower bound for the modulus of the budgeted family in terms of the
// avoidance constant: Mod_p^{x,2C1r}(Gamma_{x,y,C3}) >= 1/(2 C3^p r^p).
inline double modulus_lower_bound(double C3, double r, double p) {
  return 1.0 / (2.0 * std::pow(C3, p) * std::pow(r, p));
}

// ---------------------------------------------------------------------------
// Non-homogeneous (Phi, Psi, C) forms
// ---------------------------------------------------------------------------

struct MonotoneFn {
  std::string name;  // "identity", "power:p", "scaled-power:a:p"
  std::function<double(double)> f;

  double operator()(double t) const { return f(t); }

  // Right inverse xi(t) = inf{s : f(s) >= t}, by bisection (f increasing).
  double right_inverse(double t) const {
    if (t <= 0.0) return 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && f(hi) < t; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
      double mid = (lo + hi) / 2.0;
      if (f(mid) >= t)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
  // Gauge sigma(t) = sup{s : f(s) <= t}.
  double gauge(double t) const {
    if (t < 0.0) return 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && f(hi) <= t; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
      double mid = (lo + hi) / 2.0;
      if (f(mid) <= t)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
};

// Named builders: "identity", "power:p" (t^p), "scaled-power:a:p" (a*t^p).
inline MonotoneFn make_monotone_fn(const std::string& spec) {
  MonotoneFn fn;
  fn.name = spec;
  if (spec == "identity") {
    fn.f = [](double t) { return t; };
    return fn;
  }
  if (spec.rfind("power:", 0) == 0) {
    double p = std::stod(spec.substr(6));
    fn.f = [p](double t) { return std::pow(t, p); };
    return fn;
  }
  if (spec.rfind("scaled-power:", 0) == 0) {
    auto rest = spec.substr(13);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("scaled-power needs two parameters");
    double a = std::stod(rest.substr(0, colon));
    double p = std::stod(rest.substr(colon + 1));
    fn.f = [a, p](double t) { return a * std::pow(t, p); };
    return fn;
  }
  throw std::invalid_argument("unknown monotone function: " + spec);
}

struct NonHomogeneousForm {
  MonotoneFn Phi;
  MonotoneFn Psi;
  double C = 1.0;
};

struct GradientPair {
  std::string name;
  ScalarField f;
  ScalarField g;  // claimed upper gradient
};

struct NonHomogeneousReport {
  Report checks;
  double worst_margin = kInf;  // min over entries of rhs - lhs
  double B = 1.0;              // adversary parameter from the form
};

namespace detail {

// Minimum trapezoid integral of g over solid paths between all pairs; the
// upper-gradient inequality requires |f(u)-f(v)| <= that minimum.
inline std::vector<std::vector<double>> gradient_distances(
    const Space& sp, const ScalarField& g) {
  const int n = sp.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (int src = 0; src < n; ++src) {
    auto& row = d[src];
    row[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [dd, u] = pq.top();
      pq.pop();
      if (dd > row[u] + kTol) continue;
      for (const auto& nb : sp.neighbors(u)) {
        double c = nb.length * (g[u] + g[nb.v]) / 2.0;
        if (dd + c < row[nb.v] - kTol) {
          row[nb.v] = dd + c;
          pq.push({row[nb.v], nb.v});
        }
      }
    }
  }
  return d;
}

}  // namespace detail

// Def 2.10 scan: avg_B|f-f_B| <= r * Psi(avg_{B(x,Cr)} Phi(g)); also emits
// the adversary parameter B = max(C, [sigma(xi(1/(20 D^5))/2)]^{-1}).
inline NonHomogeneousReport check_nonhomogeneous_pi(
    const Space& sp, const NonHomogeneousForm& form,
    const std::vector<GradientPair>& family, const std::vector<double>& radii,
    const std::vector<int>& centers = {}) {
  NonHomogeneousReport rep;
  rep.checks.operation = "check_nonhomogeneous_pi";
  // Upper-gradient validity pre-check on all solid paths.
  for (const auto& pair : family) {
    auto gd = detail::gradient_distances(sp, pair.g);
    for (int u = 0; u < sp.size(); ++u)
      for (int v = u + 1; v < sp.size(); ++v)
        if (std::abs(pair.f[u] - pair.f[v]) > gd[u][v] + 1e-6)
          throw std::invalid_argument("invalid upper gradient in family: " +
                                      pair.name);
  }
  double D = doubling_constant(sp);
  double xi = form.Psi.right_inverse(1.0 / (20.0 * std::pow(D, 5.0)));
  double sigma = form.Phi.gauge(xi / 2.0);
  rep.B = std::max(form.C, sigma > kTol ? 1.0 / sigma : kInf);

  std::vector<int> cs = centers;
  if (cs.empty()) {
    cs.resize(sp.size());
    std::iota(cs.begin(), cs.end(), 0);
  }
  for (int x : cs)
    for (double r : radii) {
      if (r > sp.scale_cap() + kTol) continue;
      BallData b = ball(sp, x, r);
      BallData cb = ball(sp, x, form.C * r);
      for (const auto& pair : family) {
        double lhs = mean_deviation_from_mean(sp, pair.f, b);
        double avg_phi = 0.0;
        for (int v : cb.members)
          avg_phi += sp.weight(v) * form.Phi(pair.g[v]);
        avg_phi /= cb.mass;
        double rhs = r * form.Psi(avg_phi);
        auto e = CheckEntry::le("nonhomogeneous x=" + std::to_string(x) +
                                    " r=" + std::to_string(r) + " f=" +
                                    pair.name,
                                lhs, rhs);
        rep.worst_margin = std::min(rep.worst_margin, e.margin);
        rep.checks.add(std::move(e));
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Muckenhoupt A-infinity
// ---------------------------------------------------------------------------

struct AinftyVerdict {
  bool holds = true;
  Report checks;
  std::string worst_witness;
  double worst_margin = kInf;  // eps*mu(B) - mu(E) at the tightest ball
};

// For each ball the worst E maximizes mu(E) subject to nu(E) <= delta*nu(B):
// take vertices in ascending order of w (nu-per-mu density) and sweep
// prefixes.  Exact for atomic measures.
inline AinftyVerdict check_ainfty(const Space& sp, const ScalarField& w,
                                  double delta, double eps,
                                  const std::vector<double>& radii,
                                  const std::vector<int>& centers = {}) {
  if (!(delta > 0.0 && delta < 1.0) || !(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("check_ainfty: delta, eps in (0,1)");
  for (double wv : w)
    if (!(wv > 0.0)) throw std::invalid_argument("check_ainfty: w > 0");
  AinftyVerdict out;
  out.checks.operation = "check_ainfty";
  std::vector<int> cs = centers;
  if (cs.empty()) {
    cs.resize(sp.size());
    std::iota(cs.begin(), cs.end(), 0);
  }
  for (int x : cs)
    for (double r : radii) {
      BallData b = ball(sp, x, r);
      double nuB = 0.0;
      for (int v : b.members) nuB += sp.weight(v) * w[v];
      std::vector<int> order = b.members;
      std::sort(order.begin(), order.end(),
                [&](int a, int c) { return w[a] < w[c]; });
      double muE = 0.0, nuE = 0.0, worst_mu = 0.0;
      for (int v : order) {
        if (nuE + sp.weight(v) * w[v] > delta * nuB + kTol) break;
        nuE += sp.weight(v) * w[v];
        muE += sp.weight(v);
        worst_mu = muE;
      }
      auto e = CheckEntry::le(
          "ainfty x=" + std::to_string(x) + " r=" + std::to_string(r),
          worst_mu, eps * b.mass);
      if (e.margin < out.worst_margin) {
        out.worst_margin = e.margin;
        out.worst_witness = e.check;
      }
      if (!e.passed) out.holds = false;
      out.checks.add(std::move(e));
    }
  return out;
}

inline Space weighted_space(const Space& sp, const ScalarField& w) {
  std::vector<double> new_w(sp.size());
  for (int v = 0; v < sp.size(); ++v) {
    if (!(w[v] > 0.0))
      throw std::invalid_argument("weighted_space: weights must be positive");
    new_w[v] = sp.weight(v) * w[v];
  }
  if (!sp.from_matrix())
    return Space(std::move(new_w), sp.edges(), sp.resolution(),
                 sp.scale_cap());
  std::vector<std::vector<double>> m(sp.size(),
                                     std::vector<double>(sp.size(), 0.0));
  for (int i = 0; i < sp.size(); ++i)
    for (int j = 0; j < sp.size(); ++j) m[i][j] = sp.dist(i, j);
  return Space(std::move(new_w), std::move(m), sp.resolution(),
               sp.scale_cap());
}

}  // namespace piforge
