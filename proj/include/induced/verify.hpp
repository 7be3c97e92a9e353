#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace induced {

/// One measured quantity against its tolerance. Informational rows are
/// reported but never fail a suite.
struct CheckRow {
  std::string check;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  double seconds = 0.0;

  bool passed() const;
  size_t failures() const;
};

/// closed-form, projection, eom-residuals, conservation, regimes, boost,
/// asymptotics, figures, cauchy.
const std::vector<std::string>& suite_names();

/// Runs one suite against the configs below `configs_dir`. ConfigError for an
/// unknown suite name.
SuiteReport run_suite(const std::string& name, const std::filesystem::path& configs_dir);

std::string format_report(const SuiteReport& report);
nlohmann::json report_json(const SuiteReport& report);

}  // namespace induced
