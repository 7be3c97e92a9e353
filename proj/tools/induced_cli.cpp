// Command-line front end: roots, simulate, plot, verify.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "induced/config.hpp"
#include "induced/io.hpp"
#include "induced/verify.hpp"

#ifndef INDUCED_CONFIG_DIR
#define INDUCED_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace induced;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumeric = 3 };

struct Overrides {
  std::optional<double> t0, t1, dt;
  std::string window;
};

RunConfig load_with(const std::string& path, const Overrides& o) {
  RunConfig c = load_config(path);
  if (o.t0) c.time.t0 = *o.t0;
  if (o.t1) c.time.t1 = *o.t1;
  if (o.dt) c.time.dt = *o.dt;
  if (!(c.time.t0 < c.time.t1) || !(c.time.dt > 0.0)) {
    throw Error(ErrorCode::ConfigError, "need t0 < t1 and dt > 0");
  }
  if (!o.window.empty()) c.window = parse_window(o.window);
  return c;
}

int cmd_roots(const std::string& config, double t, const Overrides& o) {
  const RunConfig c = load_with(config, o);
  const PhasePoint point = initial_point(c);
  const RootSnapshot s = snapshot(c.model, point, c.dispersion, t, tracker_options(c));
  std::string line = "M=" + std::to_string(s.entries.size());
  for (size_t i = 0; i < s.entries.size(); ++i) line += (i ? ", " : ": ") + format_real(s.entries[i].x);
  std::cout << line << "\n";
  for (const auto& e : s.entries) {
    std::cout << "  x=" << format_real(e.x);
    if (e.factor) std::cout << " factor=" << *e.factor;
    if (e.near_double) std::cout << " near-double";
    std::cout << "\n";
  }
  return kOk;
}

Tracks run(const RunConfig& c) {
  return track(c.model, initial_point(c), c.dispersion, c.time, tracker_options(c));
}

void summary(const Tracks& tr) {
  int creations = 0, annihilations = 0, crossings = 0;
  for (const auto& e : tr.events) {
    creations += e.kind == EventKind::Creation;
    annihilations += e.kind == EventKind::Annihilation;
    crossings += e.kind == EventKind::Crossing;
  }
  std::cout << "lines=" << tr.lines.size() << " creations=" << creations << " annihilations=" << annihilations
            << " crossings=" << crossings << "\n";
}

int cmd_simulate(const std::string& config, const Overrides& o, const fs::path& out) {
  const RunConfig c = load_with(config, o);
  const Tracks tr = run(c);
  fs::create_directories(out);
  write_file_atomic(out / "worldlines.csv", worldlines_csv(tr));
  write_file_atomic(out / "events.json", events_json(tr.events));
  summary(tr);
  return kOk;
}

int cmd_plot(const std::string& config, const Overrides& o, const fs::path& out, std::string csv, std::string events,
             std::string svg) {
  std::string title;
  if (!config.empty()) {
    const RunConfig c = load_with(config, o);
    const Tracks tr = run(c);
    fs::create_directories(out);
    write_file_atomic(out / "worldlines.csv", worldlines_csv(tr));
    write_file_atomic(out / "events.json", events_json(tr.events));
    title = c.name;
    summary(tr);
  }
  if (csv.empty()) csv = (out / "worldlines.csv").string();
  if (events.empty()) events = (out / "events.json").string();
  if (svg.empty()) svg = (out / "worldlines.svg").string();
  const auto rows = parse_worldlines_csv(read_file(csv));
  const auto evs = fs::exists(events) ? parse_events_json(read_file(events)) : std::vector<Event>{};
  write_file_atomic(svg, render_svg(rows, evs, title));
  std::cout << "wrote " << svg << "\n";
  return kOk;
}

int cmd_verify(const std::string& suite, const fs::path& configs, bool json) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names = {suite};
  }
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& name : names) {
    const SuiteReport r = run_suite(name, configs);
    ok = ok && r.passed();
    if (json) {
      all.push_back(report_json(r));
    } else {
      std::cout << format_report(r);
    }
  }
  if (json) std::cout << all.dump(2) << "\n";
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced dynamical systems: real roots of f(q - x e, p) under free flow"};
  app.require_subcommand(1);

  std::string config, suite, csv, events, svg, out = ".", configs = INDUCED_CONFIG_DIR;
  double t = 0.0;
  bool json = false;
  Overrides o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--t0", o.t0, "start time");
    sub->add_option("--t1", o.t1, "end time");
    sub->add_option("--dt", o.dt, "time step");
    sub->add_option("--window", o.window, "root window lo,hi or auto");
  };

  auto* roots = app.add_subcommand("roots", "list the real roots at one time");
  roots->add_option("--config", config, "run config (JSON)")->required();
  roots->add_option("--t", t, "time");
  add_common(roots);

  auto* simulate = app.add_subcommand("simulate", "track world lines, write worldlines.csv and events.json");
  simulate->add_option("--config", config, "run config (JSON)")->required();
  simulate->add_option("--out", out, "output directory");
  add_common(simulate);

  auto* plot = app.add_subcommand("plot", "render world lines as SVG");
  plot->add_option("--config", config, "simulate this config first");
  plot->add_option("--out", out, "directory holding worldlines.csv and events.json");
  plot->add_option("--csv", csv, "world lines CSV (default <out>/worldlines.csv)");
  plot->add_option("--events", events, "events JSON (default <out>/events.json)");
  plot->add_option("--svg", svg, "output SVG (default <out>/worldlines.svg)");
  add_common(plot);

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string names = "all";
  for (const auto& n : suite_names()) names += ", " + n;
  verify->add_option("--suite", suite, "suite: " + names)->required();
  verify->add_option("--configs", configs, "config directory");
  verify->add_flag("--json", json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*roots) return cmd_roots(config, t, o);
    if (*simulate) return cmd_simulate(config, o, out);
    if (*plot) return cmd_plot(config, o, out, csv, events, svg);
    if (*verify) {
      const auto& known = suite_names();
      if (suite != "all" && std::find(known.begin(), known.end(), suite) == known.end()) {
        std::cerr << "unknown suite '" << suite << "'; expected one of: " << names << "\n";
        return kUsage;
      }
      return cmd_verify(suite, configs, json);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kUsage : kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
