#include "induced/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace induced {

namespace {

constexpr int kMaxWidenings = 8;
constexpr int kMaxScan = 1 << 16;

size_t count_in(const RootSnapshot& s, std::optional<int> factor) {
  return static_cast<size_t>(std::count_if(s.entries.begin(), s.entries.end(),
                                           [&](const RootEntry& e) { return e.factor == factor; }));
}

std::vector<std::optional<int>> factor_keys(const RootSnapshot& a, const RootSnapshot& b) {
  std::set<int> tagged;
  bool untagged = false;
  for (const auto* s : {&a, &b}) {
    for (const auto& e : s->entries) {
      if (e.factor) {
        tagged.insert(*e.factor);
      } else {
        untagged = true;
      }
    }
  }
  std::vector<std::optional<int>> keys;
  if (untagged) keys.emplace_back(std::nullopt);
  for (int f : tagged) keys.emplace_back(f);
  return keys;
}

std::vector<size_t> indices_of(const RootSnapshot& s, std::optional<int> factor) {
  std::vector<size_t> out;
  for (size_t i = 0; i < s.entries.size(); ++i) {
    if (s.entries[i].factor == factor) out.push_back(i);
  }
  return out;
}

// Within-factor rank of every entry.
std::vector<size_t> ranks(const RootSnapshot& s) {
  std::map<std::optional<int>, size_t> seen;
  std::vector<size_t> out;
  for (const auto& e : s.entries) out.push_back(seen[e.factor]++);
  return out;
}

double tolerance_at(double t, double tol_rel) { return tol_rel * std::max(1.0, std::abs(t)); }

}  // namespace

std::vector<double> TimeGrid::times() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::ConfigError, "time step must be positive");
  if (!(t1 >= t0)) throw Error(ErrorCode::ConfigError, "time grid needs t0 <= t1");
  const double span = (t1 - t0) / dt;
  const auto n = static_cast<long>(std::ceil(span - 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (long k = 0; k < n; ++k) out.push_back(t0 + static_cast<double>(k) * dt);
  out.push_back(t1);
  return out;
}

std::vector<int> RootSnapshot::factors() const {
  std::set<int> seen;
  for (const auto& e : entries) {
    if (e.factor) seen.insert(*e.factor);
  }
  return {seen.begin(), seen.end()};
}

std::vector<double> RootSnapshot::positions(std::optional<int> factor) const {
  std::vector<double> out;
  for (const auto& e : entries) {
    if (e.factor == factor) out.push_back(e.x);
  }
  return out;
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Creation: return "creation";
    case EventKind::Annihilation: return "annihilation";
    case EventKind::Crossing: return "crossing";
  }
  return "unknown";
}

RootSnapshot snapshot(const ModelSpec& model, const PhasePoint& point0, Dispersion d, double t,
                      const TrackerOptions& opts) {
  const bool lab = opts.frame == Frame::Lab;
  if (lab && !is_relativistic(model)) {
    throw Error(ErrorCode::ConfigError, "the lab frame applies to relativistic models only");
  }
  PhasePoint point = lab ? point0 : evolve(point0, d, t);
  RootFindOptions ro = opts.roots;
  if (opts.auto_window) ro.window = lab ? default_lab_window(model, point0, t) : default_window(model, point);
  for (int attempt = 0;; ++attempt) {
    try {
      const RootSet rs = lab ? find_lab_roots(model, point0, t, ro) : find_real_roots(model, point, ro);
      RootSnapshot s;
      s.t = t;
      s.window = ro.window;
      for (const auto& r : rs.roots) s.entries.push_back({r.x, r.factor, r.near_double});
      return s;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowTooSmall || attempt >= kMaxWidenings) {
        throw Error(e.code(), e.message() + " (t = " + std::to_string(t) + ")");
      }
      const double c = 0.5 * (ro.window.lo + ro.window.hi), w = ro.window.width();
      ro.window = {c - w, c + w};
      ro.n_scan = std::min(2 * ro.n_scan, kMaxScan);
    }
  }
}

Sampler make_sampler(const ModelSpec& model, const PhasePoint& point0, Dispersion d, const TrackerOptions& opts) {
  return [model, point0, d, opts](double t) { return snapshot(model, point0, d, t, opts); };
}

std::vector<RootSnapshot> simulate(const ModelSpec& model, const PhasePoint& point0, Dispersion d,
                                   const TimeGrid& grid, const TrackerOptions& opts) {
  validate(point0, model);
  std::vector<RootSnapshot> out;
  for (double t : grid.times()) out.push_back(snapshot(model, point0, d, t, opts));
  return out;
}

std::vector<std::optional<size_t>> match_roots(const RootSnapshot& prev, const RootSnapshot& next,
                                               const std::vector<double>& v_est) {
  const double dt = next.t - prev.t;
  std::vector<std::optional<size_t>> out(prev.entries.size());
  for (const auto& key : factor_keys(prev, next)) {
    const auto ip = indices_of(prev, key), in = indices_of(next, key);
    const bool prev_smaller = ip.size() <= in.size();
    // Order-preserving: embed the shorter list into the longer one.
    const auto& shortl = prev_smaller ? ip : in;
    const auto& longl = prev_smaller ? in : ip;
    const auto cost = [&](size_t s, size_t l) {
      const size_t pi = prev_smaller ? shortl[s] : longl[l];
      const size_t ni = prev_smaller ? longl[l] : shortl[s];
      const double v = v_est.empty() ? 0.0 : v_est[pi];
      return std::abs(next.entries[ni].x - (prev.entries[pi].x + v * dt));
    };
    const size_t m = shortl.size(), n = longl.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(m + 1, std::vector<double>(n + 1, inf));
    for (size_t l = 0; l <= n; ++l) dp[0][l] = 0.0;
    for (size_t s = 1; s <= m; ++s) {
      for (size_t l = s; l <= n; ++l) {
        dp[s][l] = std::min(dp[s][l - 1], dp[s - 1][l - 1] + cost(s - 1, l - 1));
      }
    }
    size_t s = m, l = n;
    while (s > 0) {
      if (l > s && dp[s][l] == dp[s][l - 1]) {
        --l;
        continue;
      }
      const size_t pi = prev_smaller ? shortl[s - 1] : longl[l - 1];
      const size_t ni = prev_smaller ? longl[l - 1] : shortl[s - 1];
      out[pi] = ni;
      --s;
      --l;
    }
  }
  return out;
}

Event locate_event(const Sampler& sample, double t_lo, double t_hi, std::optional<int> factor, double tol_rel) {
  RootSnapshot a = sample(t_lo), b = sample(t_hi);
  const size_t ca = count_in(a, factor), cb = count_in(b, factor);
  if (std::max(ca, cb) - std::min(ca, cb) != 2) {
    throw Error(ErrorCode::CountChangeNot2, "root count changes from " + std::to_string(ca) + " to " +
                                                std::to_string(cb) + " on [" + std::to_string(t_lo) + ", " +
                                                std::to_string(t_hi) + "]");
  }
  while (t_hi - t_lo > tolerance_at(t_lo, tol_rel)) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (mid <= t_lo || mid >= t_hi) break;
    RootSnapshot m = sample(mid);
    const size_t cm = count_in(m, factor);
    if (cm == ca) {
      a = std::move(m);
      t_lo = mid;
    } else if (cm == cb) {
      b = std::move(m);
      t_hi = mid;
    } else if (2 * cm == ca + cb) {
      // Sampled exactly at the tangency: the double root shows up once.
      for (const auto& r : m.entries) {
        if (r.near_double && (!factor || r.factor == factor)) {
          Event e;
          e.kind = cb > ca ? EventKind::Creation : EventKind::Annihilation;
          e.t = mid;
          e.x = r.x;
          return e;
        }
      }
      t_lo = t_hi = mid;
    } else {
      throw Error(ErrorCode::CountChangeNot2,
                  "several events between t = " + std::to_string(t_lo) + " and " + std::to_string(t_hi));
    }
  }
  const auto xs = (ca > cb ? a : b).positions(factor);
  size_t best = 0;
  for (size_t i = 1; i + 1 < xs.size(); ++i) {
    if (xs[i + 1] - xs[i] < xs[best + 1] - xs[best]) best = i;
  }
  Event e;
  e.kind = cb > ca ? EventKind::Creation : EventKind::Annihilation;
  e.t = 0.5 * (t_lo + t_hi);
  e.x = 0.5 * (xs[best] + xs[best + 1]);
  return e;
}

Event locate_event(const ModelSpec& model, const PhasePoint& point0, Dispersion d, double t_lo, double t_hi,
                   std::optional<int> factor, const TrackerOptions& opts) {
  return locate_event(make_sampler(model, point0, d, opts), t_lo, t_hi, factor, opts.event_tol);
}

namespace {

class Assembler {
 public:
  Assembler(const Sampler& sample, const TrackerOptions& opts) : sample_(sample), opts_(opts) {}

  Tracks run(const std::vector<RootSnapshot>& snapshots) {
    if (snapshots.empty()) return {};
    std::vector<RootSnapshot> seq{snapshots.front()};
    for (size_t k = 1; k < snapshots.size(); ++k) {
      if (k + 1 < snapshots.size() && on_tangency(snapshots[k - 1], snapshots[k], snapshots[k + 1])) continue;
      refine(seq.back(), snapshots[k], 0, seq);
    }

    for (const auto& e : seq.front().entries) current_.push_back(open_line(e, seq.front().t));
    for (size_t k = 1; k < seq.size(); ++k) step(seq[k - 1], seq[k]);

    for (auto& line : tracks_.lines) fill_velocities(line);
    std::stable_sort(tracks_.events.begin(), tracks_.events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    return std::move(tracks_);
  }

 private:
  // A grid time that lands on a double root sees it once, so its count is odd.
  static bool on_tangency(const RootSnapshot& prev, const RootSnapshot& s, const RootSnapshot& next) {
    for (const auto& key : factor_keys(prev, s)) {
      const size_t c = count_in(s, key), cp = count_in(prev, key), cn = count_in(next, key);
      if (std::max(c, cp) - std::min(c, cp) != 1 || std::max(c, cn) - std::min(c, cn) != 1) continue;
      for (const auto& e : s.entries) {
        if (e.near_double && e.factor == key) return true;
      }
    }
    return false;
  }

  bool needs_split(const RootSnapshot& a, const RootSnapshot& b) const {
    bool counts_equal = true;
    for (const auto& key : factor_keys(a, b)) {
      const size_t ca = count_in(a, key), cb = count_in(b, key);
      const size_t diff = std::max(ca, cb) - std::min(ca, cb);
      if (diff != 0 && diff != 2) return true;
      if (diff != 0) counts_equal = false;
    }
    if (!counts_equal) return false;
    const double limit = opts_.max_step_fraction * std::min(a.window.width(), b.window.width());
    const auto m = match_roots(a, b);
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] && std::abs(b.entries[*m[i]].x - a.entries[i].x) > limit) return true;
    }
    return false;
  }

  void refine(RootSnapshot a, const RootSnapshot& b, int depth, std::vector<RootSnapshot>& out) const {
    if (sample_ && depth < opts_.max_refine_depth && needs_split(a, b)) {
      RootSnapshot mid = sample_(0.5 * (a.t + b.t));
      refine(a, mid, depth + 1, out);
      refine(mid, b, depth + 1, out);
      return;
    }
    out.push_back(b);
  }

  size_t open_line(const RootEntry& e, double t) {
    WorldLine line;
    line.id = static_cast<int>(tracks_.lines.size());
    line.factor = e.factor;
    line.samples.push_back({t, e.x, 0.0});
    tracks_.lines.push_back(std::move(line));
    return tracks_.lines.size() - 1;
  }

  double velocity_estimate(size_t line) const {
    const auto& s = tracks_.lines[line].samples;
    if (s.size() < 2) return 0.0;
    const auto& p = s[s.size() - 2];
    const auto& q = s.back();
    return (q.x - p.x) / (q.t - p.t);
  }

  Event place_event(const RootSnapshot& a, const RootSnapshot& b, std::optional<int> factor,
                    const std::vector<double>& xs) const {
    if (sample_) return locate_event(sample_, a.t, b.t, factor, opts_.event_tol);
    Event e;
    e.kind = count_in(b, factor) > count_in(a, factor) ? EventKind::Creation : EventKind::Annihilation;
    e.t = 0.5 * (a.t + b.t);
    e.x = xs.empty() ? 0.0 : 0.5 * (xs.front() + xs.back());
    return e;
  }

  Event place_crossing(const RootSnapshot& a, const RootSnapshot& b, size_t i, size_t j) const {
    const auto rank = ranks(a);
    const auto fi = a.entries[i].factor, fj = a.entries[j].factor;
    const size_t ri = rank[i], rj = rank[j];
    const size_t ci = count_in(a, fi), cj = count_in(a, fj);
    double tl = a.t, th = b.t;
    double dl = a.entries[i].x - a.entries[j].x;
    double xl = 0.5 * (a.entries[i].x + a.entries[j].x);
    const auto bm = match_roots(a, b);
    double dh = b.entries[*bm[i]].x - b.entries[*bm[j]].x;
    double xh = 0.5 * (b.entries[*bm[i]].x + b.entries[*bm[j]].x);
    bool bisected = false;
    if (sample_) {
      bisected = true;
      while (th - tl > tolerance_at(tl, opts_.event_tol)) {
        const double tm = 0.5 * (tl + th);
        if (tm <= tl || tm >= th) break;
        const RootSnapshot m = sample_(tm);
        if (count_in(m, fi) != ci || count_in(m, fj) != cj) {
          bisected = false;
          break;
        }
        const double xi = m.positions(fi)[ri], xj = m.positions(fj)[rj];
        if ((xi - xj) * dl > 0.0) {
          tl = tm;
          dl = xi - xj;
          xl = 0.5 * (xi + xj);
        } else {
          th = tm;
          dh = xi - xj;
          xh = 0.5 * (xi + xj);
        }
      }
    }
    Event e;
    e.kind = EventKind::Crossing;
    if (bisected) {
      e.t = 0.5 * (tl + th);
      e.x = 0.5 * (xl + xh);
    } else {
      const double w = dl / (dl - dh);
      e.t = tl + w * (th - tl);
      e.x = xl + w * (xh - xl);
    }
    return e;
  }

  void step(const RootSnapshot& a, const RootSnapshot& b) {
    std::vector<double> v(a.entries.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = velocity_estimate(current_[i]);
    const auto m = match_roots(a, b, v);

    std::vector<std::optional<size_t>> next_line(b.entries.size());
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i]) next_line[*m[i]] = current_[i];
    }

    for (const auto& key : factor_keys(a, b)) {
      std::vector<size_t> dying, born;
      std::vector<double> xs;
      for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i] && a.entries[i].factor == key) {
          dying.push_back(current_[i]);
          xs.push_back(a.entries[i].x);
        }
      }
      for (size_t j = 0; j < b.entries.size(); ++j) {
        if (!next_line[j] && b.entries[j].factor == key) {
          next_line[j] = open_line(b.entries[j], b.t);
          born.push_back(*next_line[j]);
          xs.push_back(b.entries[j].x);
        }
      }
      if (dying.empty() && born.empty()) continue;
      const size_t ca = count_in(a, key), cb = count_in(b, key);
      // A root leaving a fixed window changes the count by one: no event.
      if (std::max(ca, cb) - std::min(ca, cb) != 2) continue;
      Event e = place_event(a, b, key, xs);
      for (size_t id : dying) e.line_ids.push_back(tracks_.lines[id].id);
      for (size_t id : born) e.line_ids.push_back(tracks_.lines[id].id);
      for (size_t id : dying) tracks_.lines[id].death = e;
      for (size_t id : born) tracks_.lines[id].birth = e;
      tracks_.events.push_back(e);
    }

    for (size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      for (size_t j = i + 1; j < m.size(); ++j) {
        if (!m[j] || a.entries[i].factor == a.entries[j].factor) continue;
        const double before = a.entries[i].x - a.entries[j].x;
        const double after = b.entries[*m[i]].x - b.entries[*m[j]].x;
        if (before == 0.0 || before * after > 0.0) continue;
        Event e = place_crossing(a, b, i, j);
        e.line_ids = {tracks_.lines[current_[i]].id, tracks_.lines[current_[j]].id};
        tracks_.events.push_back(e);
      }
    }

    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i]) tracks_.lines[current_[i]].samples.push_back({b.t, b.entries[*m[i]].x, 0.0});
    }
    current_.clear();
    for (const auto& id : next_line) current_.push_back(*id);
  }

  static void fill_velocities(WorldLine& line) {
    auto& s = line.samples;
    if (s.size() < 2) return;
    for (size_t k = 0; k < s.size(); ++k) {
      const size_t lo = k == 0 ? 0 : k - 1;
      const size_t hi = k + 1 == s.size() ? k : k + 1;
      s[k].v = (s[hi].x - s[lo].x) / (s[hi].t - s[lo].t);
    }
  }

  const Sampler& sample_;
  const TrackerOptions& opts_;
  Tracks tracks_;
  std::vector<size_t> current_;  // line index for each entry of the latest snapshot
};

}  // namespace

Tracks assemble(const std::vector<RootSnapshot>& snapshots, const Sampler& sample, const TrackerOptions& opts) {
  return Assembler(sample, opts).run(snapshots);
}

Tracks track(const ModelSpec& model, const PhasePoint& point0, Dispersion d, const TimeGrid& grid,
             const TrackerOptions& opts) {
  const auto snaps = simulate(model, point0, d, grid, opts);
  return assemble(snaps, make_sampler(model, point0, d, opts), opts);
}

}  // namespace induced
