#pragma once

// Batch front door: a serializable run configuration and a dispatcher that
// maps operation names onto module calls and produces a machine-readable
// report.  Shared by the CLI and the test-suite.

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "piforge/connectivity.hpp"
#include "piforge/core.hpp"
#include "piforge/corpus.hpp"
#include "piforge/oracle.hpp"
#include "piforge/poincare.hpp"
#include "piforge/thicken.hpp"

namespace piforge {

struct RunConfig {
  std::string operation;               // subcommand name
  std::string space_spec;              // generator spec or @file path
  std::map<std::string, std::string> params;
  std::string out_path;                // report JSON destination, optional
  std::uint64_t seed = 1;
  std::string adversary_mode = "exact";
  int exhaustion_limit = 22;
  int threads = 1;                     // recorded; execution is sequential

  double get(const std::string& key, double dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : std::stod(it->second);
  }
  int geti(const std::string& key, int dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : std::stoi(it->second);
  }
  std::string gets(const std::string& key, const std::string& dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  }
};

struct RunResult {
  int exit_code = 0;  // 0 = all checks pass, 1 = a check refuted, 2 = usage
  Report report;
};

namespace detail {

inline Space resolve_space(const RunConfig& cfg) {
  if (cfg.space_spec.empty())
    throw std::invalid_argument("missing space spec");
  if (cfg.space_spec[0] == '@') return load_space(cfg.space_spec.substr(1));
  return generate(cfg.space_spec);
}

inline AdversaryMode parse_mode(const std::string& s) {
  if (s == "exact") return AdversaryMode::Exact;
  if (s == "greedy") return AdversaryMode::Greedy;
  if (s == "rho" || s == "rho-guided") return AdversaryMode::RhoGuided;
  throw std::invalid_argument("unknown adversary mode: " + s);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

inline void record_common(Report& rep, const RunConfig& cfg) {
  rep.space_spec = cfg.space_spec;
  rep.param("seed", std::to_string(cfg.seed));
  rep.param("threads", std::to_string(cfg.threads));
}

// ---- certify -------------------------------------------------------------

inline Report run_certify(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "certify";
  record_common(rep, cfg);
  ConnectivityParams params;
  params.C = cfg.get("C", 1.0);
  params.delta = cfg.get("delta", 0.5);
  params.eps = cfg.get("eps", 0.25);
  params.r0 = cfg.get("r0", sp.scale_cap());
  rep.param("C", std::to_string(params.C));
  rep.param("delta", std::to_string(params.delta));
  rep.param("eps", std::to_string(params.eps));
  rep.param("mode", cfg.adversary_mode);
  AdversaryMode mode = parse_mode(cfg.adversary_mode);
  int xq = cfg.geti("x", -1), yq = cfg.geti("y", -1);
  std::vector<std::pair<int, int>> pairs;
  if (xq >= 0 && yq >= 0) {
    pairs.push_back({xq, yq});
  } else {
    for (int x = 0; x < sp.size(); ++x)
      for (int y = x + 1; y < sp.size(); ++y)
        if (sp.dist(x, y) <= params.r0 + kTol) pairs.push_back({x, y});
  }
  for (auto [x, y] : pairs) {
    auto v = verify_pair(sp, x, y, params, mode, cfg.exhaustion_limit);
    std::string wit = to_string(v.status);
    if (!v.witness_obstacle.empty()) {
      wit += " E={";
      for (std::size_t i = 0; i < v.witness_obstacle.size(); ++i)
        wit += (i ? "," : "") + std::to_string(v.witness_obstacle[i]);
      wit += "}";
    }
    rep.add(CheckEntry::le("pair (" + std::to_string(x) + "," +
                               std::to_string(y) + ") min_undef <= delta*d",
                           v.min_undef, params.delta * sp.dist(x, y), wit));
  }
  return rep;
}

// ---- alpha ---------------------------------------------------------------

inline Report run_alpha(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "alpha";
  record_common(rep, cfg);
  double C1 = cfg.get("C1", 2.0);
  rep.param("C1", std::to_string(C1));
  std::vector<double> taus;
  if (cfg.params.count("taus")) {
    taus = parse_list(cfg.params.at("taus"));
  } else {
    double t = cfg.get("tau0", 0.10), ratio = cfg.get("tau_ratio", 1.35);
    for (int i = 0; i < cfg.geti("tau_count", 6); ++i, t *= ratio)
      taus.push_back(t);
  }
  // Default sample: the longest pairs (they see the richest obstacle sets).
  std::vector<std::pair<int, int>> pairs;
  double dmax = sp.diameter();
  double cutoff = cfg.get("pair_cutoff", dmax - 2.0 * sp.resolution());
  for (int x = 0; x < sp.size(); ++x)
    for (int y = x + 1; y < sp.size(); ++y)
      if (sp.dist(x, y) >= cutoff - kTol) pairs.push_back({x, y});
  auto res = estimate_fine_alpha(sp, C1, taus, pairs, cfg.exhaustion_limit);
  rep.param("alpha_hat", std::to_string(res.alpha_hat));
  rep.param("C2_hat", std::to_string(res.C2_hat));
  rep.param("residual", std::to_string(res.residual));
  for (auto [tau, d] : res.table)
    rep.param("delta(" + std::to_string(tau) + ")", std::to_string(d));
  rep.add(CheckEntry::le("fit not degenerate", res.degenerate ? 1.0 : 0.0,
                         0.0));
  if (cfg.params.count("alpha_min"))
    rep.add(CheckEntry::le("alpha_hat >= alpha_min", cfg.get("alpha_min", 0.0),
                           res.alpha_hat));
  if (cfg.params.count("alpha_max"))
    rep.add(CheckEntry::le("alpha_hat <= alpha_max", res.alpha_hat,
                           cfg.get("alpha_max", kInf)));
  return rep;
}

// ---- quasiconvex ---------------------------------------------------------

inline Report run_quasiconvex(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "quasiconvex";
  record_common(rep, cfg);
  double C = cfg.get("C", 1.25), delta = cfg.get("delta", 0.5);
  int x = cfg.geti("x", 0), y = cfg.geti("y", sp.size() - 1);
  rep.param("C", std::to_string(C));
  rep.param("delta", std::to_string(delta));
  auto res = quasiconvexify(sp, x, y, C, delta, cfg.geti("max_iters", 64));
  rep.add(CheckEntry::le("recursion converged", res.success ? 0.0 : 1.0, 0.0));
  if (res.success) {
    rep.add(CheckEntry::le("len <= C/(1-delta) d + 2h", res.fragment.len(),
                           C / (1.0 - delta) * sp.dist(x, y) +
                               2.0 * sp.resolution()));
    rep.add(CheckEntry::le("gap-free", res.fragment.undef(), 0.0));
  }
  for (std::size_t i = 0; i < res.ledger.per_iteration.size(); ++i)
    rep.param("iter" + std::to_string(i),
              "len=" + std::to_string(res.ledger.per_iteration[i].first) +
                  " undef=" +
                  std::to_string(res.ledger.per_iteration[i].second));
  return rep;
}

// ---- poincare ------------------------------------------------------------

inline Report run_poincare(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "poincare";
  record_common(rep, cfg);
  double p = cfg.get("p", 2.0), C = cfg.get("C", 1.0);
  rep.param("p", std::to_string(p));
  rep.param("C", std::to_string(C));
  std::vector<double> radii =
      cfg.params.count("radii")
          ? parse_list(cfg.params.at("radii"))
          : std::vector<double>{sp.scale_cap() / 4.0, sp.scale_cap() / 2.0,
                                sp.scale_cap()};
  auto fam = default_function_family(sp, cfg.geti("family", 8), cfg.seed);
  auto pr = pi_scan(sp, p, C, fam, radii);
  rep.param("C_PI_hat", std::to_string(pr.C_PI_hat));
  rep.param("worst_witness", pr.worst_witness);
  rep.add(CheckEntry::le("no PI violation at zero gradient",
                         pr.zero_gradient_violation ? 1.0 : 0.0, 0.0,
                         pr.violation_witness));
  rep.add(CheckEntry::le("empirical constant finite", pr.C_PI_hat, kInf));
  return rep;
}

// ---- modulus -------------------------------------------------------------

inline Report run_modulus(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "modulus";
  record_common(rep, cfg);
  int x = cfg.geti("x", 0), y = cfg.geti("y", sp.size() - 1);
  double C = cfg.get("C", 1.0), p = cfg.get("p", 2.0);
  double s = cfg.get("s", C * sp.dist(x, y));
  rep.param("p", std::to_string(p));
  rep.param("C", std::to_string(C));
  rep.param("s", std::to_string(s));
  auto res = modulus(sp, x, y, C, p, s);
  rep.param("mod", std::to_string(res.value));
  rep.param("iterations", std::to_string(res.iterations));
  if (!res.feasible) {
    rep.add(CheckEntry::le("no admissible path (Mod = 0, flagged)", 1.0, 0.0));
    return rep;
  }
  rep.add(CheckEntry::le("all discovered constraints met within 1e-6",
                         -res.worst_slack, 1e-6));
  return rep;
}

// ---- ainfty --------------------------------------------------------------

inline Report run_ainfty(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "ainfty";
  record_common(rep, cfg);
  double delta = cfg.get("delta", 0.1), eps = cfg.get("eps", 0.5);
  rep.param("delta", std::to_string(delta));
  rep.param("eps", std::to_string(eps));
  ScalarField w(sp.size(), 1.0);
  std::string wspec = cfg.gets("weight", "uniform");
  if (wspec.rfind("line-power:", 0) == 0) {
    double a = std::stod(wspec.substr(11));
    for (int v = 0; v < sp.size(); ++v) {
      double xv = -1.0 + 2.0 * v / (sp.size() - 1);
      w[v] = std::pow(std::max(std::abs(xv), 0.05), a);
    }
  } else if (wspec != "uniform") {
    throw std::invalid_argument("unknown weight spec: " + wspec);
  }
  std::vector<double> radii =
      cfg.params.count("radii")
          ? parse_list(cfg.params.at("radii"))
          : std::vector<double>{sp.scale_cap() / 2.0, sp.scale_cap()};
  auto verdict = check_ainfty(sp, w, delta, eps, radii);
  Report out = verdict.checks;
  out.operation = "ainfty";
  out.space_spec = cfg.space_spec;
  for (const auto& [k, v] : rep.params) out.param(k, v);
  return out;
}

// ---- thicken -------------------------------------------------------------

inline Report run_thicken(const RunConfig& cfg) {
  if (cfg.space_spec.rfind("fat_cantor:", 0) != 0)
    throw std::invalid_argument(
        "thicken expects a triple generator spec (fat_cantor:depth)");
  int depth = std::stoi(cfg.space_spec.substr(11));
  TripleSpace t = make_fat_cantor(depth);
  auto complex = thicken(t.space, t.A, t.K, cfg.get("r0", 1.0),
                         cfg.get("scale_h", t.space.resolution()));
  glued_metric(complex);
  Report rep = verify_estimates(complex);
  rep.operation = "thicken";
  rep.space_spec = cfg.space_spec;
  double h_g = kInf;
  for (const auto& e : complex.edges) h_g = std::min(h_g, e.length);
  h_g /= 2.0;
  auto glued = glued_measure(complex, h_g);
  double p = cfg.get("p", 2.0);
  auto cert =
      certify_thickened(complex, glued, p, cfg.geti("center_samples", 48));
  for (const auto& e : cert.report.results) rep.add(e);
  for (const auto& [k, v] : cert.report.params) rep.param(k, v);
  return rep;
}

// ---- constants -----------------------------------------------------------

inline Report run_constants(const RunConfig& cfg) {
  Report rep;
  rep.operation = "constants";
  record_common(rep, cfg);
  double D = cfg.get("D", 2.0), C = cfg.get("C", 2.0);
  double delta = cfg.get("delta", 0.5), eps = cfg.get("eps", 0.5);
  double p = cfg.get("p", 12.0);
  auto pc = predicted_constants(D, C, delta, eps, p);
  rep.param("M", std::to_string(pc.M));
  rep.param("alpha", std::to_string(pc.alpha));
  rep.param("C1", std::to_string(pc.C1));
  rep.param("C2", std::to_string(pc.C2));
  rep.param("Mprime", std::to_string(pc.Mprime));
  rep.param("delta_prime", std::to_string(pc.delta_prime));
  rep.param("C3", std::to_string(pc.C3));
  rep.param("C_PI", std::to_string(pc.C_PI));
  rep.param("k", std::to_string(pc.k));
  rep.add(CheckEntry::le("M' delta' < 1", pc.Mprime * pc.delta_prime, 1.0));
  rep.add(CheckEntry::le("p > 1/alpha", 1.0 / pc.alpha, p));
  return rep;
}

// ---- oracle --------------------------------------------------------------

inline Report run_oracle(const RunConfig& cfg) {
  Space sp = resolve_space(cfg);
  Report rep;
  rep.operation = "oracle";
  record_common(rep, cfg);
  if (sp.size() > 8)
    throw std::invalid_argument("oracle cross-checks need <= 8 vertices");
  double C = cfg.get("C", 1.5), eps = cfg.get("eps", 0.25);
  std::vector<char> empty(sp.size(), 0);
  for (int x = 0; x < sp.size(); ++x)
    for (int y = x + 1; y < sp.size(); ++y) {
      double budget = C * sp.dist(x, y);
      auto fast = pareto_fragments(sp, x, y, empty, budget);
      auto slow = brute_pareto(sp, x, y, empty, budget);
      double fast_mu = fast.min_undef(budget);
      double slow_mu = kInf;
      for (auto [l, u] : slow)
        if (l <= budget + kTol) slow_mu = std::min(slow_mu, u);
      rep.add(CheckEntry::eq("pareto min_undef (" + std::to_string(x) + "," +
                                 std::to_string(y) + ")",
                             fast_mu, slow_mu));
      auto advf = worst_obstacle(sp, x, y, C, eps, cfg.exhaustion_limit);
      auto advs = brute_worst_obstacle(sp, x, y, C, eps);
      rep.add(CheckEntry::eq("adversary value (" + std::to_string(x) + "," +
                                 std::to_string(y) + ")",
                             advf.min_undef, advs.min_undef));
    }
  return rep;
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg) {
  RunResult res;
  try {
    if (cfg.operation == "certify")
      res.report = detail::run_certify(cfg);
    else if (cfg.operation == "alpha")
      res.report = detail::run_alpha(cfg);
    else if (cfg.operation == "quasiconvex")
      res.report = detail::run_quasiconvex(cfg);
    else if (cfg.operation == "poincare")
      res.report = detail::run_poincare(cfg);
    else if (cfg.operation == "modulus")
      res.report = detail::run_modulus(cfg);
    else if (cfg.operation == "ainfty")
      res.report = detail::run_ainfty(cfg);
    else if (cfg.operation == "thicken")
      res.report = detail::run_thicken(cfg);
    else if (cfg.operation == "constants")
      res.report = detail::run_constants(cfg);
    else if (cfg.operation == "oracle")
      res.report = detail::run_oracle(cfg);
    else
      throw std::invalid_argument("unknown operation: " + cfg.operation);
  } catch (const std::invalid_argument&) {
    res.exit_code = 2;
    throw;
  }
  res.exit_code = res.report.all_passed() ? 0 : 1;
  if (!cfg.out_path.empty()) save_report(cfg.out_path, res.report);
  return res;
}

}  // namespace piforge
