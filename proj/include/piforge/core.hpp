#pragma once

// Shared primitives: comparison tolerance, check records, and small helpers
// used by every module.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace piforge {

inline constexpr const char* kToolVersion = "piforge 0.1.0";

// Global comparison tolerance for set-membership thresholds and inequality
// checks.  Certificates additionally record the margin by which each
// inequality holds.
inline constexpr double kTol = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One verified inequality: check passes when lhs <= rhs + kTol; margin is
// rhs - lhs (negative margin means a violation).
struct CheckEntry {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::string witness;

  static CheckEntry le(std::string name, double lhs, double rhs,
                       std::string witness = "") {
    CheckEntry e;
    e.check = std::move(name);
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.passed = lhs <= rhs + kTol;
    e.witness = std::move(witness);
    return e;
  }
  static CheckEntry eq(std::string name, double lhs, double rhs,
                       std::string witness = "") {
    CheckEntry e;
    e.check = std::move(name);
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = -std::abs(lhs - rhs);
    e.passed = std::abs(lhs - rhs) <= kTol;
    e.witness = std::move(witness);
    return e;
  }
};

struct Report {
  std::string space_spec;
  std::string operation;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CheckEntry> results;

  void add(CheckEntry e) { results.push_back(std::move(e)); }
  void param(const std::string& k, const std::string& v) {
    params.emplace_back(k, v);
  }
  bool all_passed() const {
    for (const auto& e : results)
      if (!e.passed) return false;
    return true;
  }
  int failures() const {
    int n = 0;
    for (const auto& e : results)
      if (!e.passed) ++n;
    return n;
  }
};

inline double log2d(double x) { return std::log2(x); }

}  // namespace piforge
