// Command-line front end.  Each subcommand maps one-to-one onto a library
// operation; flags mirror the JSON config file keys, with flags taking
// precedence over the file.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "piforge/run.hpp"

namespace {

using piforge::RunConfig;

// Operation parameters accepted per subcommand; every name is both a CLI
// flag (--name) and a config-file key.
const std::map<std::string, std::vector<std::string>> kOpParams = {
    {"certify", {"C", "delta", "eps", "r0", "x", "y"}},
    {"alpha",
     {"C1", "taus", "tau0", "tau_ratio", "tau_count", "pair_cutoff",
      "alpha_min", "alpha_max"}},
    {"quasiconvex", {"C", "delta", "x", "y", "max_iters"}},
    {"poincare", {"p", "C", "radii", "family"}},
    {"modulus", {"p", "C", "s", "x", "y"}},
    {"ainfty", {"delta", "eps", "weight", "radii"}},
    {"thicken", {"r0", "scale_h", "p", "center_samples"}},
    {"constants", {"D", "C", "delta", "eps", "p"}},
    {"oracle", {"C", "eps"}},
};

int run_subcommand(const std::string& op,
                   const std::map<std::string, std::string>& flag_values,
                   const std::string& config_path) {
  RunConfig cfg;
  cfg.operation = op;
  if (const char* t = std::getenv("PIFORGE_THREADS"))
    cfg.threads = std::max(1, std::atoi(t));

  // Config file first, flags override.
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file: " << config_path << "\n";
      return 2;
    }
    nlohmann::json j;
    in >> j;
    for (auto& [key, val] : j.items()) {
      std::string s = val.is_string() ? val.get<std::string>() : val.dump();
      if (key == "space") cfg.space_spec = s;
      else if (key == "out") cfg.out_path = s;
      else if (key == "seed") cfg.seed = std::stoull(s);
      else if (key == "mode") cfg.adversary_mode = s;
      else if (key == "exhaustion_limit") cfg.exhaustion_limit = std::stoi(s);
      else cfg.params[key] = s;
    }
  }
  for (const auto& [key, s] : flag_values) {
    if (key == "space") cfg.space_spec = s;
    else if (key == "out") cfg.out_path = s;
    else if (key == "seed") cfg.seed = std::stoull(s);
    else if (key == "mode") cfg.adversary_mode = s;
    else if (key == "exhaustion_limit") cfg.exhaustion_limit = std::stoi(s);
    else cfg.params[key] = s;
  }

  piforge::RunResult res;
  try {
    res = piforge::run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  // Human-readable summary to stdout; full report goes to --out.
  for (const auto& [k, v] : res.report.params)
    std::cout << k << " = " << v << "\n";
  for (const auto& e : res.report.results)
    std::cout << (e.passed ? "PASS" : "FAIL") << "  " << e.check
              << "  (lhs=" << e.lhs << " rhs=" << e.rhs
              << (e.witness.empty() ? "" : " " + e.witness) << ")\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piforge: connectivity, Poincare, and thickening toolkit"};
  app.set_version_flag("--version", piforge::kToolVersion);
  app.require_subcommand(1);

  struct SubState {
    std::map<std::string, std::string> values;
    std::string config_path;
  };
  std::map<std::string, SubState> states;

  for (const auto& [op, names] : kOpParams) {
    CLI::App* sub = app.add_subcommand(op);
    SubState& st = states[op];
    sub->add_option("--config", st.config_path, "JSON config file");
    std::vector<std::string> common = {"space", "out",  "seed",
                                       "mode",  "exhaustion_limit"};
    for (const auto& name : common)
      sub->add_option_function<std::string>(
          "--" + name,
          [&st, name](const std::string& v) { st.values[name] = v; });
    for (const auto& name : names)
      sub->add_option_function<std::string>(
          "--" + name,
          [&st, name](const std::string& v) { st.values[name] = v; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [op, st] : states)
    if (app.got_subcommand(op))
      return run_subcommand(op, st.values, st.config_path);
  std::cerr << "error: no subcommand\n";
  return 2;
}
