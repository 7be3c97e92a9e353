// Acceptance run: one line per criterion, then the informational rows.
// Usage: acceptance [configs_dir] [--verbose]

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "induced/verify.hpp"

#ifndef INDUCED_CONFIG_DIR
#define INDUCED_CONFIG_DIR "configs"
#endif

namespace {

struct Criterion {
  int number;
  const char* title;
  const char* suite;
};

const Criterion kCriteria[] = {
    {1, "closed-form two-body motion and event times", "closed-form"},
    {2, "projection identity for CM and RS", "projection"},
    {3, "equation-of-motion residuals", "eom-residuals"},
    {4, "conservation of H and of re-solved momenta", "conservation"},
    {5, "regime classification predicts the event structure", "regimes"},
    {6, "light-cone speeds and boost covariance", "boost"},
    {7, "CM N=2 decay ratios", "asymptotics"},
    {8, "figure topology", "figures"},
    {9, "Cauchy round trip", "cauchy"},
};

constexpr double kSuiteBudget = 10.0;  // seconds per suite

// The failing row if any, else the row closest to its tolerance.
const induced::CheckRow* headline(const induced::SuiteReport& r) {
  const induced::CheckRow* best = nullptr;
  double best_ratio = -1.0;
  for (const auto& row : r.rows) {
    if (row.informational) continue;
    if (!row.pass) return &row;
    if (row.measured > row.tolerance) continue;  // an "at least" count
    const double ratio = row.tolerance > 0.0 ? row.measured / row.tolerance : (row.measured == 0.0 ? 0.0 : 1.0);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = &row;
    }
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::string configs = INDUCED_CONFIG_DIR;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--verbose") == 0) {
      verbose = true;
    } else {
      configs = argv[i];
    }
  }

  std::vector<induced::SuiteReport> reports;
  int failed = 0;
  for (const auto& c : kCriteria) {
    auto rep = induced::run_suite(c.suite, configs);
    const auto* h = headline(rep);
    const bool ok = rep.passed() && !rep.rows.empty();
    failed += !ok;
    std::printf("[%s] criterion %d, %s: %zu checks, %zu failed, %.2f s", ok ? "PASS" : "FAIL", c.number, c.title,
                rep.rows.size(), rep.failures(), rep.seconds);
    if (h) std::printf("; %s: %.3g (tolerance %.3g)", h->check.c_str(), h->measured, h->tolerance);
    std::printf("\n");
    reports.push_back(std::move(rep));
  }

  std::printf("\n");
  for (size_t k = 0; k < reports.size(); ++k) {
    const double s = reports[k].seconds;
    std::printf("[%s] %s suite time %.2f s (budget %.0f s)\n", s <= kSuiteBudget ? "info" : "SLOW",
                reports[k].suite.c_str(), s, kSuiteBudget);
  }

  // The literal concrete case of criterion 1 uses the printed x12^2 coefficient.
  std::printf("\n[FAIL, not counted] criterion 1 concrete case as literally stated (events at t = -1/6 and 1/2): "
              "unattainable, the tracked roots of (x - q1)(x - q2) = C/4 meet at t = (1 -+ sqrt 2)/2; "
              "-1/6 and 1/2 are the zeros of the misprinted coefficient (C v12 t)^2\n");

  for (const auto& rep : reports) {
    for (const auto& row : rep.rows) {
      if (!row.informational && !verbose) continue;
      std::printf("  [%s] %s / %s: %.6g (%s)\n", row.informational ? "info" : (row.pass ? "pass" : "FAIL"),
                  rep.suite.c_str(), row.check.c_str(), row.measured, row.detail.c_str());
    }
  }

  std::printf("\n%d of %zu criteria failed\n", failed, std::size(kCriteria));
  return failed == 0 ? 0 : 1;
}
