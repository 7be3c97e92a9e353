#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "induced/rootfind.hpp"

namespace induced {

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 0.01;

  /// t0, t0 + dt, ... up to and including t1 (the last step may be short).
  std::vector<double> times() const;
};

/// Native: roots of the model in its own variables (cone variables for the
/// relativistic models). Lab: relativistic models read in x = (xi + eta)/2,
/// t = (xi - eta)/2.
enum class Frame { Native, Lab };

struct TrackerOptions {
  RootFindOptions roots;
  bool auto_window = true;  ///< recompute the window per snapshot
  Frame frame = Frame::Native;
  double max_step_fraction = 0.1;  ///< of the window width, between matched samples
  int max_refine_depth = 10;
  double event_tol = 1e-10;  ///< relative, times max(1, |t|)
};

struct RootEntry {
  double x = 0.0;
  std::optional<int> factor;
  bool near_double = false;
};

struct RootSnapshot {
  double t = 0.0;
  std::vector<RootEntry> entries;  ///< ascending in x
  Window window;

  std::vector<int> factors() const;
  std::vector<double> positions(std::optional<int> factor) const;
};

enum class EventKind { Creation, Annihilation, Crossing };
std::string_view to_string(EventKind kind) noexcept;

struct Event {
  EventKind kind = EventKind::Creation;
  double t = 0.0;
  double x = 0.0;
  std::vector<int> line_ids;
};

struct LineSample {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
};

struct WorldLine {
  int id = 0;
  std::optional<int> factor;
  std::vector<LineSample> samples;
  std::optional<Event> birth;
  std::optional<Event> death;
};

struct Tracks {
  std::vector<WorldLine> lines;
  std::vector<Event> events;  ///< time-ordered
};

using Sampler = std::function<RootSnapshot(double)>;

/// Roots at time t, widening the window while a root sits at its edge.
RootSnapshot snapshot(const ModelSpec& model, const PhasePoint& point0, Dispersion d, double t,
                      const TrackerOptions& opts);
Sampler make_sampler(const ModelSpec& model, const PhasePoint& point0, Dispersion d, const TrackerOptions& opts);

std::vector<RootSnapshot> simulate(const ModelSpec& model, const PhasePoint& point0, Dispersion d,
                                   const TimeGrid& grid, const TrackerOptions& opts);

/// For each entry of `prev`, the index of its continuation in `next` (or none).
/// Entries are matched only within their factor, preserving order, at minimum
/// total |x_next - (x_prev + v dt)|. `v_est` holds one velocity per entry of
/// prev (zeros when empty).
std::vector<std::optional<size_t>> match_roots(const RootSnapshot& prev, const RootSnapshot& next,
                                               const std::vector<double>& v_est = {});

/// Bisection in t on the root count of `factor` between t_lo and t_hi.
Event locate_event(const Sampler& sample, double t_lo, double t_hi, std::optional<int> factor,
                   double tol_rel = 1e-10);
Event locate_event(const ModelSpec& model, const PhasePoint& point0, Dispersion d, double t_lo, double t_hi,
                   std::optional<int> factor, const TrackerOptions& opts = {});

/// Chains snapshots into world lines. With a sampler, intervals are refined
/// where lines move too far and events are located by bisection; without
/// one, events are placed at interval midpoints.
Tracks assemble(const std::vector<RootSnapshot>& snapshots, const Sampler& sample = {},
                const TrackerOptions& opts = {});

Tracks track(const ModelSpec& model, const PhasePoint& point0, Dispersion d, const TimeGrid& grid,
             const TrackerOptions& opts);

}  // namespace induced
