#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "induced/cauchy.hpp"
#include "induced/tracker.hpp"

namespace induced {

/// Structural facts a run is expected to show; every field is optional.
struct Expectations {
  std::optional<int> lines;
  std::optional<int> spanning_lines;  ///< lines without birth or death
  std::optional<int> creations;
  std::optional<int> annihilations;
  std::optional<int> min_events;      ///< creations + annihilations
  std::optional<int> crossings;
  std::optional<int> min_crossings;
  std::optional<int> factors_with_roots;
  std::optional<int> max_roots;
  std::optional<int> min_roots;
  std::optional<std::string> regime;
  std::optional<std::string> pattern;
  bool periodic_separation = false;  ///< x1 - x2 of a two-line run is periodic in t
};

/// One run: model, initial data, time grid, root-finding window.
struct RunConfig {
  std::string name;
  ModelSpec model;
  Dispersion dispersion = Dispersion::Quadratic;
  std::vector<int> epsilon;
  std::optional<std::vector<Index>> pairing;
  std::optional<PhasePoint> phase;  ///< q, p given directly
  std::optional<CauchyData> cauchy;  ///< x, v given instead
  TimeGrid time{-5.0, 5.0, 0.05};
  std::optional<Window> window;  ///< fixed window; auto when empty
  int n_scan = 1024;
  Frame frame = Frame::Native;
  Expectations expect;
};

/// Parses a config document. `source` prefixes diagnostics.
RunConfig parse_config(const nlohmann::json& doc, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);
/// All *.json files of a directory, sorted by file name.
std::vector<RunConfig> load_config_dir(const std::filesystem::path& dir);

ModelSpec model_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json model_to_json(const ModelSpec& model);

/// Phase point at t = 0: the given (q, p), or the solution of the Cauchy
/// problem (closed form for the two-body polynomial and sinh models).
PhasePoint initial_point(const RunConfig& config);

TrackerOptions tracker_options(const RunConfig& config);

/// "lo,hi" or "auto".
std::optional<Window> parse_window(const std::string& text);

}  // namespace induced
