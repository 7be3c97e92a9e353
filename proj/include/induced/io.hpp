#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "induced/tracker.hpp"

namespace induced {

/// 17 significant digits, so a value survives a text round trip.
std::string format_real(double value);

/// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// One row of worldlines.csv.
struct CsvRow {
  double t = 0.0;
  int line_id = 0;
  std::optional<int> factor;  ///< empty field for single-factor models
  double x = 0.0;
};

/// Header `t,line_id,factor_id,x`, rows grouped by line, time-ordered.
std::string worldlines_csv(const Tracks& tracks);
std::vector<CsvRow> parse_worldlines_csv(const std::string& text);

/// Array of {kind, t, x, line_ids}.
std::string events_json(const std::vector<Event>& events);
std::vector<Event> parse_events_json(const std::string& text);

/// World lines in the (x, t) plane, t upwards, with event markers.
std::string render_svg(const std::vector<CsvRow>& rows, const std::vector<Event>& events,
                       const std::string& title = "");

}  // namespace induced
