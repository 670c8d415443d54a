#pragma once

// Machine-readable verification reports. Every check names the mathematical
// claim it tests and always records residual and tolerance, never a bare
// boolean. Reports serialize with a stable key order and are written
// atomically (temp file + rename) so failed runs leave no partial output.

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace nlab {

using ordered_json = nlohmann::ordered_json;

enum class CheckMode { assert_pass, expect_violation, informational };

inline const char* to_string(CheckMode m) {
  switch (m) {
    case CheckMode::assert_pass: return "assert";
    case CheckMode::expect_violation: return "expect-violation";
    case CheckMode::informational: return "informational";
  }
  return "assert";
}

struct CheckResult {
  std::string name;
  std::string claim;  // the tested statement, in plain mathematical language
  double residual = 0.0;
  double tolerance = 0.0;
  CheckMode mode = CheckMode::assert_pass;
  bool pass = false;

  static CheckResult asserted(std::string name, std::string claim, double residual,
                              double tolerance) {
    CheckResult c{std::move(name), std::move(claim), residual, tolerance,
                  CheckMode::assert_pass, residual < tolerance};
    return c;
  }
  static CheckResult violation_expected(std::string name, std::string claim, double residual,
                                        double tolerance) {
    // a negative control passes exactly when the underlying assertion fails
    CheckResult c{std::move(name), std::move(claim), residual, tolerance,
                  CheckMode::expect_violation, residual >= tolerance};
    return c;
  }
  static CheckResult info(std::string name, std::string claim, double value) {
    CheckResult c{std::move(name), std::move(claim), value, 0.0, CheckMode::informational, true};
    return c;
  }
};

struct VerificationReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  ordered_json grid_meta = ordered_json::object();
  ordered_json informational = ordered_json::object();
  double elapsed_ms = 0.0;  // console diagnostics; not serialized, so reports
                            // with a fixed seed stay byte-identical
  bool overall_pass = true;

  void add(CheckResult c) {
    if (c.mode != CheckMode::informational && !c.pass) overall_pass = false;
    checks.push_back(std::move(c));
  }

  ordered_json to_json() const {
    ordered_json j;
    j["scenario"] = scenario;
    j["overall_pass"] = overall_pass;
    j["grid"] = grid_meta;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
      ordered_json e;
      e["name"] = c.name;
      e["claim"] = c.claim;
      e["residual"] = c.residual;
      e["tolerance"] = c.tolerance;
      e["mode"] = to_string(c.mode);
      e["pass"] = c.pass;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["informational"] = informational;
    return j;
  }
};

inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic rename failed for " + path);
}

inline void write_report(const VerificationReport& rep, const std::string& path) {
  write_file_atomic(path, rep.to_json().dump(2) + "\n");
}

}  // namespace nlab
