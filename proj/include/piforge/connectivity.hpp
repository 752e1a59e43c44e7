#pragma once

// The min-max connectivity game of Def 1.3, fine alpha-connectivity
// estimation (Def 1.5), the gap-filling constructions (Thms 3.4/3.7), and
// the paper's explicit constant calculators.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "piforge/core.hpp"
#include "piforge/fragments.hpp"
#include "piforge/space.hpp"

namespace piforge {

struct ConnectivityParams {
  double C = 1.0;
  double delta = 0.5;
  double eps = 0.5;
  double r0 = 1.0;
};

enum class AdversaryMode { Exact, Greedy, RhoGuided };

inline const char* to_string(AdversaryMode m) {
  switch (m) {
    case AdversaryMode::Exact: return "exact";
    case AdversaryMode::Greedy: return "greedy";
    case AdversaryMode::RhoGuided: return "rho-guided";
  }
  return "?";
}

enum class VerdictStatus { CertifiedYes, Refuted, NoCounterexampleFound };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::CertifiedYes: return "certified-yes";
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::NoCounterexampleFound: return "no-counterexample-found";
  }
  return "?";
}

struct ConnectivityVerdict {
  int x = 0, y = 0;
  ConnectivityParams params;
  VerdictStatus status = VerdictStatus::NoCounterexampleFound;
  AdversaryMode mode = AdversaryMode::Exact;
  std::vector<int> witness_obstacle;   // worst obstacle found
  std::optional<CurveFragment> witness_fragment;
  double min_undef = 0.0;              // under the worst obstacle found
  double margin = 0.0;                 // delta*d(x,y) - min_undef
  bool zero_margin_flag = false;
};

// ---------------------------------------------------------------------------
// Adversary
// ---------------------------------------------------------------------------

// Def 1.3 leaves the obstacle unconstrained outside B(x, C r); the exact
// adversary therefore blocks every vertex outside the open ball for free
// (endpoints stay exempt inside pareto_fragments).
inline std::vector<char> free_obstacle_mask(const Space& sp, int x, double Cr) {
  std::vector<char> m(sp.size(), 0);
  const auto& row = sp.dist_row(x);
  for (int v = 0; v < sp.size(); ++v)
    if (!(row[v] < Cr - kTol || row[v] < kTol)) m[v] = 1;
  return m;
}

struct AdversaryResult {
  std::vector<int> E;       // budgeted obstacle inside the ball
  double min_undef = 0.0;   // min undef over budgeted fragments under E
  double obstacle_mass = 0.0;
  double budget = 0.0;      // eps * mu(B(x,Cr))
  double ball_mass = 0.0;
  CurveFragment best_fragment;  // achieving min_undef under E
  long evaluations = 0;
};

namespace detail {

struct AdversaryCtx {
  const Space& sp;
  int x, y;
  double Cr;
  std::vector<char> mask;  // free outside-ball obstacle, plus current E
  long evaluations = 0;

  double eval() {
    ++evaluations;
    auto front = pareto_fragments(sp, x, y, mask, Cr);
    return front.min_undef(Cr);
  }
};

}  // namespace detail

// Exact worst obstacle by branch-and-bound over budgeted subsets of
// B(x, Cr) \ {x,y}.  Bound: min_undef is monotone nondecreasing in E, so the
// value of any completion of a partial set is at most the value with every
// remaining candidate added (budget relaxed).
inline AdversaryResult worst_obstacle(const Space& sp, int x, int y, double C,
                                      double eps, int exhaustion_limit = 22) {
  double r = sp.dist(x, y);
  double Cr = C * r;
  AdversaryResult res;
  res.ball_mass = ball_mass(sp, x, std::max(Cr, kTol));
  res.budget = eps * res.ball_mass;

  detail::AdversaryCtx ctx{sp, x, y, Cr,
                           free_obstacle_mask(sp, x, std::max(Cr, kTol))};

  std::vector<int> cands;
  {
    BallData b = ball(sp, x, std::max(Cr, kTol));
    for (int v : b.members)
      if (v != x && v != y && sp.weight(v) <= res.budget - kTol)
        cands.push_back(v);
  }
  if (static_cast<int>(cands.size()) > exhaustion_limit)
    throw std::runtime_error(
        "exact adversary refused: ball has " + std::to_string(cands.size()) +
        " candidate vertices (limit " + std::to_string(exhaustion_limit) + ")");
  // Light candidates first (more can fit under the budget); among equal
  // weights, central vertices first — they tend to sever more fragments, so
  // good incumbents appear early and ties resolve to the natural blocker.
  std::sort(cands.begin(), cands.end(), [&](int a, int b) {
    if (sp.weight(a) != sp.weight(b)) return sp.weight(a) < sp.weight(b);
    double ca = std::min(sp.dist(x, a), sp.dist(y, a));
    double cb = std::min(sp.dist(x, b), sp.dist(y, b));
    if (ca != cb) return ca > cb;
    return a < b;
  });

  double incumbent = -1.0;
  std::vector<int> incumbent_E;

  // Depth-first search; prune when even the all-in relaxation cannot beat
  // the incumbent.
  std::function<void(std::size_t, double, std::vector<int>&)> dfs =
      [&](std::size_t i, double mass, std::vector<int>& chosen) {
        // Upper bound: add every remaining candidate regardless of budget.
        for (std::size_t j = i; j < cands.size(); ++j) ctx.mask[cands[j]] = 1;
        double ub = ctx.eval();
        for (std::size_t j = i; j < cands.size(); ++j) ctx.mask[cands[j]] = 0;
        // restore chosen
        for (int v : chosen) ctx.mask[v] = 1;
        if (ub <= incumbent + kTol) return;
        if (i == cands.size() ||
            mass + sp.weight(cands[i]) > res.budget - kTol) {
          // Leaf (or nothing else fits in weight-sorted order beyond pruning;
          // heavier candidates may still fit is impossible since sorted asc).
          double val = ctx.eval();
          if (val > incumbent) {
            incumbent = val;
            incumbent_E = chosen;
          }
          if (i == cands.size()) return;
        }
        // Branch: include cands[i] if affordable, then exclude.
        int v = cands[i];
        if (mass + sp.weight(v) <= res.budget - kTol) {
          ctx.mask[v] = 1;
          chosen.push_back(v);
          dfs(i + 1, mass + sp.weight(v), chosen);
          chosen.pop_back();
          ctx.mask[v] = 0;
        }
        dfs(i + 1, mass, chosen);
      };
  std::vector<int> chosen;
  // Seed the incumbent with the empty obstacle.
  incumbent = ctx.eval();
  incumbent_E = {};
  dfs(0, 0.0, chosen);

  res.E = incumbent_E;
  res.min_undef = incumbent;
  for (int v : res.E) res.obstacle_mass += sp.weight(v);
  // Recompute the certifying fragment under the worst obstacle.
  for (int v : res.E) ctx.mask[v] = 1;
  auto front = pareto_fragments(sp, x, y, ctx.mask, Cr);
  if (const ParetoEntry* e = front.best_for(Cr)) res.best_fragment = e->fragment;
  res.evaluations = ctx.evaluations;
  return res;
}

// Greedy bottleneck adversary: repeatedly add the cheapest affordable
// interior vertex of the current best fragment.
inline AdversaryResult greedy_obstacle(const Space& sp, int x, int y, double C,
                                       double eps) {
  double r = sp.dist(x, y);
  double Cr = C * r;
  AdversaryResult res;
  res.ball_mass = ball_mass(sp, x, std::max(Cr, kTol));
  res.budget = eps * res.ball_mass;
  detail::AdversaryCtx ctx{sp, x, y, Cr,
                           free_obstacle_mask(sp, x, std::max(Cr, kTol))};
  double mass = 0.0;
  for (;;) {
    auto front = pareto_fragments(sp, x, y, ctx.mask, Cr);
    double mu = front.min_undef(Cr);
    ++ctx.evaluations;
    if (mu > res.min_undef) {
      res.min_undef = mu;
      res.E.clear();
      for (int v = 0; v < sp.size(); ++v)
        if (ctx.mask[v] && sp.dist(x, v) < Cr - kTol) res.E.push_back(v);
      if (const ParetoEntry* e = front.best_for(Cr))
        res.best_fragment = e->fragment;
    } else if (const ParetoEntry* e = front.best_for(Cr);
               e && res.best_fragment.legs.empty() && res.E.empty()) {
      res.best_fragment = e->fragment;
    }
    const ParetoEntry* e = front.best_for(Cr);
    if (!e) break;
    int pick = -1;
    double pick_w = kInf;
    for (int v : e->fragment.visited())
      if (v != x && v != y && !ctx.mask[v] &&
          sp.dist(x, v) < Cr - kTol && mass + sp.weight(v) <= res.budget - kTol &&
          sp.weight(v) < pick_w) {
        pick = v;
        pick_w = sp.weight(v);
      }
    if (pick < 0) break;
    ctx.mask[pick] = 1;
    mass += sp.weight(pick);
  }
  res.obstacle_mass = 0.0;
  for (int v : res.E) res.obstacle_mass += sp.weight(v);
  res.evaluations = ctx.evaluations;
  return res;
}

// Rho-guided adversary: score candidates by rho_x + rho_y (small values sit
// on near-optimal routes), pack cheapest-score-first within budget,
// re-deriving rho as the obstacle grows.
inline AdversaryResult rho_obstacle(const Space& sp, int x, int y, double C,
                                    double eps, double B) {
  double r = sp.dist(x, y);
  double Cr = C * r;
  AdversaryResult res;
  res.ball_mass = ball_mass(sp, x, std::max(Cr, kTol));
  res.budget = eps * res.ball_mass;
  detail::AdversaryCtx ctx{sp, x, y, Cr,
                           free_obstacle_mask(sp, x, std::max(Cr, kTol))};
  double mass = 0.0;
  for (;;) {
    double mu = ctx.eval();
    if (mu > res.min_undef) {
      res.min_undef = mu;
      res.E.clear();
      for (int v = 0; v < sp.size(); ++v)
        if (ctx.mask[v] && sp.dist(x, v) < Cr - kTol) res.E.push_back(v);
    }
    auto rx = rho_test_function(sp, x, ctx.mask, B);
    auto ry = rho_test_function(sp, y, ctx.mask, B);
    int pick = -1;
    double pick_score = kInf;
    for (int v = 0; v < sp.size(); ++v) {
      if (v == x || v == y || ctx.mask[v]) continue;
      if (!(sp.dist(x, v) < Cr - kTol)) continue;
      if (mass + sp.weight(v) > res.budget - kTol) continue;
      double score = rx.rho[v] + ry.rho[v];
      if (score < pick_score - kTol ||
          (score < pick_score + kTol && pick >= 0 &&
           sp.weight(v) < sp.weight(pick))) {
        pick = v;
        pick_score = score;
      }
    }
    if (pick < 0) break;
    ctx.mask[pick] = 1;
    mass += sp.weight(pick);
  }
  for (int v : res.E) ctx.mask[v] = 1;
  auto front = pareto_fragments(sp, x, y, ctx.mask, Cr);
  if (const ParetoEntry* e = front.best_for(Cr)) res.best_fragment = e->fragment;
  res.obstacle_mass = 0.0;
  for (int v : res.E) res.obstacle_mass += sp.weight(v);
  res.evaluations = ctx.evaluations;
  return res;
}

// ---------------------------------------------------------------------------
// verify_pair
// ---------------------------------------------------------------------------

inline ConnectivityVerdict verify_pair(const Space& sp, int x, int y,
                                       const ConnectivityParams& params,
                                       AdversaryMode mode = AdversaryMode::Exact,
                                       int exhaustion_limit = 22,
                                       double rho_B = 2.0) {
  double r = sp.dist(x, y);
  if (r > params.r0 + kTol)
    throw std::invalid_argument("verify_pair: d(x,y) exceeds r0");
  ConnectivityVerdict v;
  v.x = x;
  v.y = y;
  v.params = params;
  v.mode = mode;
  if (x == y) {
    v.status = VerdictStatus::CertifiedYes;
    v.margin = 0.0;
    return v;
  }
  // Trivial regime: the two-point fragment has undef = d <= delta*d.
  if (params.delta >= 1.0) {
    v.status = VerdictStatus::CertifiedYes;
    v.witness_fragment = two_point_fragment(sp, x, y);
    v.min_undef = r;
    v.margin = params.delta * r - r;
    v.zero_margin_flag = v.margin <= kTol;
    return v;
  }
  AdversaryResult adv;
  switch (mode) {
    case AdversaryMode::Exact:
      adv = worst_obstacle(sp, x, y, params.C, params.eps, exhaustion_limit);
      break;
    case AdversaryMode::Greedy:
      adv = greedy_obstacle(sp, x, y, params.C, params.eps);
      break;
    case AdversaryMode::RhoGuided:
      adv = rho_obstacle(sp, x, y, params.C, params.eps,
                         std::max(params.C, rho_B));
      break;
  }
  v.min_undef = adv.min_undef;
  v.margin = params.delta * r - adv.min_undef;
  v.zero_margin_flag = std::abs(v.margin) <= kTol;
  if (adv.min_undef <= params.delta * r + kTol) {
    v.status = mode == AdversaryMode::Exact
                   ? VerdictStatus::CertifiedYes
                   : VerdictStatus::NoCounterexampleFound;
    v.witness_fragment = adv.best_fragment;
  } else {
    v.status = VerdictStatus::Refuted;
    v.witness_obstacle = adv.E;
    v.witness_fragment = adv.best_fragment;  // best response, still too gappy
  }
  return v;
}

// ---------------------------------------------------------------------------
// Predicted constants (Thm 1.6 / Thm 1.7 / Thm 3.9 / Lemma 3.2)
// ---------------------------------------------------------------------------

struct PredictedConstants {
  double alpha = 0.0;
  double M = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double Mprime = 0.0;
  double delta_prime = 0.0;
  double C3 = 0.0;
  double C_PI = 0.0;
  double k = 0.0;               // Lemma 3.2 exponent
  double doubling_eps_pow = 0.0;  // eps^k: mu(B(x,r/2)) >= eps^k mu(B(x,r))
};

inline PredictedConstants predicted_constants(double D, double C, double delta,
                                              double eps, double p) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("predicted_constants: delta in (0,1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("predicted_constants: eps in (0,1)");
  if (!(D >= 1.0)) throw std::invalid_argument("predicted_constants: D >= 1");
  PredictedConstants pc;
  pc.M = 2.0 * std::max(std::pow(D, -log2d(1.0 - delta) + 1.0),
                        std::pow(D, 3.0));
  pc.alpha = std::log(delta) / std::log(eps / (2.0 * pc.M));
  pc.C1 = C / (1.0 - delta);
  pc.C2 = 2.0 * pc.M / eps;
  if (!(p > 1.0 / pc.alpha))
    throw std::invalid_argument("predicted_constants: need p > 1/alpha");
  double D4 = std::pow(D, 4.0);
  pc.Mprime = 2.0 * std::pow(D4, 1.0 / (p * pc.alpha - 1.0));
  pc.delta_prime = std::pow(D4 / std::pow(pc.Mprime, p), pc.alpha);
  if (!(pc.Mprime * pc.delta_prime < 1.0))
    throw std::invalid_argument("predicted_constants: M'*delta' >= 1");
  pc.C3 = pc.C1 * pc.Mprime / (1.0 - pc.Mprime * pc.delta_prime);
  pc.C_PI = 2.0 * pc.C3;
  pc.k = 1.0 - 1.0 / log2d(delta);
  pc.doubling_eps_pow = std::pow(eps, pc.k);
  return pc;
}

// Lemma 5.12: a (C,delta,eps)-connected space is
// (2^K C, delta, eps D^{-K-1})-connected at the shifted scale.
inline ConnectivityParams change_scale_params(double C, double delta,
                                              double eps, int K_shift,
                                              double D) {
  if (K_shift < 0)
    throw std::invalid_argument("change_scale_params: K_shift >= 0");
  ConnectivityParams p;
  p.C = std::pow(2.0, K_shift) * C;
  p.delta = delta;
  p.eps = eps * std::pow(D, -(K_shift + 1.0));
  return p;
}

// Lemma 3.2: connectivity implies doubling:
// mu(B(x,r/2)) >= eps^k mu(B(x,r)) with k = 1 - 1/log2(delta).
inline Report implied_doubling_check(const Space& sp,
                                     const ConnectivityParams& params) {
  Report rep;
  rep.operation = "implied_doubling_check";
  double k = 1.0 - 1.0 / log2d(params.delta);
  double bound = std::pow(params.eps, k);
  for (int x = 0; x < sp.size(); ++x) {
    auto radii = sp.critical_distances_from(x, params.r0);
    radii.push_back(params.r0);
    for (double r : radii) {
      if (r > params.r0 + kTol) continue;
      double big = ball_mass(sp, x, r);
      double small = ball_mass(sp, x, r / 2.0);
      rep.add(CheckEntry::le("implied_doubling x=" + std::to_string(x) +
                                 " r=" + std::to_string(r),
                             bound * big, small));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// estimate_fine_alpha (Def 1.5)
// ---------------------------------------------------------------------------

struct FineAlphaResult {
  double alpha_hat = 0.0;
  double C2_hat = 0.0;
  double residual = 0.0;
  bool degenerate = false;
  std::vector<std::pair<double, double>> table;  // (tau, delta(tau))
};

inline FineAlphaResult estimate_fine_alpha(
    const Space& sp, double C1, const std::vector<double>& tau_grid,
    const std::vector<std::pair<int, int>>& pairs, int exhaustion_limit = 22) {
  if (pairs.empty()) throw std::invalid_argument("estimate_fine_alpha: pairs");
  FineAlphaResult res;
  for (double tau : tau_grid) {
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("tau grid must lie in (0,1)");
    double worst = 0.0;
    for (auto [x, y] : pairs) {
      auto adv = worst_obstacle(sp, x, y, C1, tau, exhaustion_limit);
      worst = std::max(worst, adv.min_undef / sp.dist(x, y));
    }
    res.table.push_back({tau, worst});
  }
  // Least-squares fit of log delta(tau) against log tau over positive rows.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (auto [tau, d] : res.table) {
    if (!(d > 0.0)) continue;
    double lx = std::log(tau), ly = std::log(d);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2 || std::abs(m * sxx - sx * sx) < kTol) {
    res.degenerate = true;
    return res;
  }
  res.alpha_hat = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - res.alpha_hat * sx) / m;
  res.C2_hat = std::exp(intercept);
  for (auto [tau, d] : res.table) {
    if (!(d > 0.0)) continue;
    double pred = intercept + res.alpha_hat * std::log(tau);
    res.residual += (std::log(d) - pred) * (std::log(d) - pred);
  }
  return res;
}

// ---------------------------------------------------------------------------
// quasiconvexify (Thm 3.4) and avoid_integral_curve (Thm 3.7)
// ---------------------------------------------------------------------------

struct GapFillLedger {
  std::vector<std::pair<double, double>> per_iteration;  // (len, undef)
  bool converged = false;
  int iterations = 0;
};

namespace detail {

// Replace every gap longer than `floor` by the minimal-undef budgeted
// fragment avoiding `mask`; ties in undef break toward smaller integral of
// tie_field (used by avoid_integral_curve), then smaller len.
inline bool fill_gaps_once(const Space& sp, CurveFragment& frag, double C,
                           const std::vector<char>& mask, double floor,
                           const ScalarField* tie_field, double delta_cap,
                           std::vector<int>* refuted_pair) {
  std::vector<Leg> out;
  bool changed = false;
  for (const auto& leg : frag.legs) {
    if (leg.kind != Leg::GAP || leg.length <= floor + kTol) {
      out.push_back(leg);
      continue;
    }
    auto front = pareto_fragments(sp, leg.u, leg.v, mask, C * leg.length);
    const ParetoEntry* pick = nullptr;
    double pick_int = kInf;
    for (const auto& e : front.entries) {
      if (e.len > C * leg.length + kTol) continue;
      bool better = false;
      if (!pick || e.undef < pick->undef - kTol) {
        better = true;
      } else if (e.undef <= pick->undef + kTol && tie_field) {
        double ei = fragment_integral(e.fragment, *tie_field);
        if (ei < pick_int - kTol) better = true;
      }
      if (better) {
        pick = &e;
        pick_int = tie_field ? fragment_integral(e.fragment, *tie_field) : 0.0;
      }
    }
    if (!pick || pick->undef > delta_cap * leg.length + kTol) {
      if (refuted_pair) *refuted_pair = {leg.u, leg.v};
      return false;
    }
    if (!pick->fragment.legs.empty() &&
        !(pick->fragment.legs.size() == 1 &&
          pick->fragment.legs[0].kind == Leg::GAP)) {
      changed = true;
    }
    for (const auto& l : pick->fragment.legs) out.push_back(l);
  }
  frag.legs = std::move(out);
  frag = normalize(sp, frag);
  (void)changed;
  return true;
}

// Splice an explicit shortest solid path for every remaining gap.
inline void splice_geodesics(const Space& sp, CurveFragment& frag) {
  std::vector<Leg> out;
  for (const auto& leg : frag.legs) {
    if (leg.kind != Leg::GAP) {
      out.push_back(leg);
      continue;
    }
    // Dijkstra path reconstruction u -> v.
    const auto& row = sp.dist_row(leg.u);
    std::vector<int> path = {leg.v};
    int cur = leg.v;
    while (cur != leg.u) {
      int next = -1;
      for (const auto& nb : sp.neighbors(cur))
        if (std::abs(row[nb.v] + nb.length - row[cur]) <= kTol) {
          next = nb.v;
          break;
        }
      if (next < 0) {  // disconnected (matrix space covers all pairs)
        out.push_back(leg);
        path.clear();
        break;
      }
      path.push_back(next);
      cur = next;
    }
    if (path.empty()) continue;
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      double L = sp.dist(path[i], path[i + 1]);
      for (const auto& nb : sp.neighbors(path[i]))
        if (nb.v == path[i + 1]) {
          L = nb.length;
          break;
        }
      out.push_back({Leg::SOLID, path[i], path[i + 1], L});
    }
  }
  frag.legs = std::move(out);
}

}  // namespace detail

struct QuasiconvexResult {
  CurveFragment fragment;
  GapFillLedger ledger;
  bool success = false;
};

// Thm 3.4 recursion with E = empty: repeatedly fill gaps under budget
// C*d(u,v) until every gap is at most the resolution, then splice geodesics.
inline QuasiconvexResult quasiconvexify(const Space& sp, int x, int y, double C,
                                        double delta, int max_iters = 64) {
  QuasiconvexResult res;
  res.fragment = two_point_fragment(sp, x, y);
  std::vector<char> empty_mask(sp.size(), 0);
  double h = sp.resolution();
  res.ledger.per_iteration.push_back(
      {res.fragment.len(), res.fragment.undef()});
  for (int it = 0; it < max_iters; ++it) {
    bool done = true;
    for (const auto& l : res.fragment.legs)
      if (l.kind == Leg::GAP && l.length > h + kTol) done = false;
    if (done) {
      res.ledger.converged = true;
      break;
    }
    ++res.ledger.iterations;
    if (!detail::fill_gaps_once(sp, res.fragment, C, empty_mask, h, nullptr,
                                delta >= 1.0 ? 1.0 : delta, nullptr)) {
      return res;  // not fillable under the delta cap: report partial
    }
    res.ledger.per_iteration.push_back(
        {res.fragment.len(), res.fragment.undef()});
  }
  if (!res.ledger.converged) return res;
  detail::splice_geodesics(sp, res.fragment);
  res.fragment = normalize(sp, res.fragment);
  res.success = true;
  return res;
}

struct AvoidIntegralResult {
  CurveFragment fragment;
  double integral = 0.0;
  double C3 = 0.0;
  bool success = false;       // rounds all succeeded
  bool bound_holds = false;   // integral <= C3 * d(x,y)
  std::vector<int> refuting_obstacle;
  std::vector<int> refuted_pair;
  GapFillLedger ledger;
};

// Thm 3.7 induction at the discrete scale: at round n, build the level set
// E = {M_s g^p > M'^{(n+1)p}} of the maximal function and fill gaps with
// fragments avoiding it; the undef cap per fill is delta' * d(u,v).
inline AvoidIntegralResult avoid_integral_curve(const Space& sp, int x, int y,
                                                const ScalarField& g, double p,
                                                double alpha, double C1,
                                                int max_iters = 32) {
  double r = sp.dist(x, y);
  double D = doubling_constant(sp);
  AvoidIntegralResult res;
  // Thm 1.7 constants for the given fine parameters.
  if (!(p * alpha > 1.0))
    throw std::invalid_argument("avoid_integral_curve: need p*alpha > 1");
  double D4 = std::pow(D, 4.0);
  double Mp = 2.0 * std::pow(D4, 1.0 / (p * alpha - 1.0));
  double dp = std::pow(D4 / std::pow(Mp, p), alpha);
  if (!(Mp * dp < 1.0))
    throw std::invalid_argument("avoid_integral_curve: M'*delta' >= 1");
  res.C3 = C1 * Mp / (1.0 - Mp * dp);

  // Normalization precondition: ball-average of g^p at most 1 on B(x, 2C1 r).
  {
    BallData b = ball(sp, x, std::max(2.0 * C1 * r, kTol));
    double avg = 0.0;
    for (int v : b.members) avg += sp.weight(v) * std::pow(g[v], p);
    avg /= b.mass;
    if (avg > 1.0 + 1e-6)
      throw std::invalid_argument(
          "avoid_integral_curve: g^p ball average exceeds 1 (got " +
          std::to_string(avg) + ")");
  }

  ScalarField gp(sp.size());
  for (int v = 0; v < sp.size(); ++v) gp[v] = std::pow(std::abs(g[v]), p);

  res.fragment = two_point_fragment(sp, x, y);
  double h = sp.resolution();
  res.ledger.per_iteration.push_back(
      {res.fragment.len(), res.fragment.undef()});
  for (int n = 0; n < max_iters; ++n) {
    bool done = true;
    for (const auto& l : res.fragment.legs)
      if (l.kind == Leg::GAP && l.length > h + kTol) done = false;
    if (done) {
      res.ledger.converged = true;
      break;
    }
    ++res.ledger.iterations;
    double scale = std::max(2.0 * C1 * std::pow(dp, n) * r, h);
    ScalarField M = maximal_function(sp, gp, scale);
    double threshold = std::pow(Mp, (n + 1.0) * p);
    std::vector<char> mask(sp.size(), 0);
    std::vector<int> level_set;
    for (int v = 0; v < sp.size(); ++v)
      if (M[v] > threshold + kTol) {
        mask[v] = 1;
        level_set.push_back(v);
      }
    std::vector<int> bad_pair;
    if (!detail::fill_gaps_once(sp, res.fragment, C1, mask, h, &g, dp,
                                &bad_pair)) {
      res.refuting_obstacle = level_set;
      res.refuted_pair = bad_pair;
      res.integral = fragment_integral(res.fragment, g);
      return res;
    }
    res.ledger.per_iteration.push_back(
        {res.fragment.len(), res.fragment.undef()});
  }
  if (!res.ledger.converged) return res;
  detail::splice_geodesics(sp, res.fragment);
  res.fragment = normalize(sp, res.fragment);
  res.integral = fragment_integral(res.fragment, g);
  res.success = true;
  res.bound_holds = res.integral <= res.C3 * r + kTol;
  return res;
}

}  // namespace piforge
