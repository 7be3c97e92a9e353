#include "induced/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "induced/config.hpp"
#include "induced/io.hpp"
#include "induced/oracles.hpp"

namespace induced {

namespace fs = std::filesystem;

bool SuiteReport::passed() const { return failures() == 0; }

size_t SuiteReport::failures() const {
  return static_cast<size_t>(
      std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass && !r.informational; }));
}

namespace {

constexpr double kFdStep = 1e-3;     // stencil spacing for accelerations
constexpr double kEventMargin = 0.1;  // probes this close to a count change are skipped

CheckRow row(std::string check, double measured, double tol, std::string detail = "") {
  const bool ok = std::isfinite(measured) && measured <= tol;
  return {std::move(check), measured, tol, ok, false, std::move(detail)};
}

CheckRow count_row(std::string check, long observed, long expected, std::string detail = "") {
  detail = "observed " + std::to_string(observed) + ", expected " + std::to_string(expected) +
           (detail.empty() ? "" : "; " + detail);
  return {std::move(check), static_cast<double>(std::labs(observed - expected)), 0.0, observed == expected, false,
          std::move(detail)};
}

CheckRow info_row(std::string check, double measured, std::string detail) {
  return {std::move(check), measured, 0.0, true, true, std::move(detail)};
}

std::vector<RunConfig> configs_in(const fs::path& root, const char* sub) {
  const fs::path dir = root / sub;
  if (!fs::is_directory(dir)) return {};
  return load_config_dir(dir);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  return out;
}

int event_count(const Tracks& tr, EventKind k) {
  return static_cast<int>(std::count_if(tr.events.begin(), tr.events.end(), [&](const Event& e) { return e.kind == k; }));
}

Tracks run(const RunConfig& c) { return track(c.model, initial_point(c), c.dispersion, c.time, tracker_options(c)); }

CauchyData random_pair(std::mt19937_64& rng, double x_span, double v_span) {
  std::uniform_real_distribution<double> ux(-x_span, x_span), uv(-v_span, v_span), uc(-1.0, 1.0);
  const double centre = uc(rng), x12 = ux(rng);
  CauchyData d;
  d.x = RVector(2);
  d.v = RVector(2);
  d.x << centre + 0.5 * x12, centre - 0.5 * x12;
  d.v << uv(rng), uv(rng);
  return d;
}

// Roots, velocities and accelerations at t, or nothing when the stencil or
// its neighbourhood sees a count change or nearly touching roots.
std::optional<EomState> probe_state(const Sampler& sample, double t, size_t n_expected, double min_gap = 0.02) {
  const size_t c0 = sample(t - kEventMargin).entries.size();
  const size_t c1 = sample(t + kEventMargin).entries.size();
  if (c0 != n_expected || c1 != n_expected) return std::nullopt;
  std::vector<Stencil> st;
  try {
    st = local_derivatives(sample, t, kFdStep);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EventInWindow) return std::nullopt;
    throw;
  }
  if (st.size() != n_expected) return std::nullopt;
  EomState s;
  const auto n = static_cast<Index>(st.size());
  s.x.resize(n);
  s.v.resize(n);
  s.a.resize(n);
  for (Index i = 0; i < n; ++i) {
    s.x[i] = st[static_cast<size_t>(i)].x;
    s.v[i] = st[static_cast<size_t>(i)].v;
    s.a[i] = st[static_cast<size_t>(i)].a;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(s.x[i] - s.x[j]) < min_gap) return std::nullopt;
    }
  }
  return s;
}

// ---------------------------------------------------------------- closed-form

struct Poly2Compare {
  double position = 0.0;
  double event_time = 0.0;
  int count_mismatches = 0;
  size_t samples = 0;
  size_t events = 0;
};

Poly2Compare compare_poly2(double C, const CauchyData& data, const TimeGrid& grid, int n_scan) {
  TrackerOptions opts;
  opts.roots.n_scan = n_scan;
  const PhasePoint pt = evolve(cauchy_poly2(C, data), Dispersion::Quadratic, -data.t_ref);
  const Tracks tr = track(PolynomialProduct{C}, pt, Dispersion::Quadratic, grid, opts);
  Poly2Compare out;
  for (const auto& line : tr.lines) {
    for (const auto& s : line.samples) {
      // Next to a double root both sides lose digits; those samples say nothing.
      const double tr = s.t - data.t_ref;
      if (poly2_closed_form(C, data, tr).x12_sq < 1e-6) continue;
      const auto roots = poly2_roots(C, data, tr);
      double err = std::numeric_limits<double>::infinity();
      for (double r : roots) err = std::min(err, std::abs(r - s.x));
      out.position = std::max(out.position, err);
      ++out.samples;
    }
  }
  std::vector<double> expected;
  const auto zeros = poly2_event_times(C, data);
  if (zeros.size() == 2 && zeros[1] - zeros[0] > 1e-6) {
    for (double z : zeros) {
      z += data.t_ref;
      if (z > grid.t0 + 1e-6 && z < grid.t1 - 1e-6) expected.push_back(z);
    }
  }
  std::vector<double> observed;
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::Crossing) observed.push_back(e.t);
  }
  std::sort(observed.begin(), observed.end());
  if (observed.size() != expected.size()) {
    ++out.count_mismatches;
  } else {
    for (size_t i = 0; i < observed.size(); ++i) out.event_time = std::max(out.event_time, std::abs(observed[i] - expected[i]));
  }
  out.events = expected.size();
  return out;
}

void suite_closed_form(const fs::path& root, SuiteReport& rep) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uC(-5.0, 5.0);
  Poly2Compare worst;
  int runs = 0;
  while (runs < 100) {
    const double C = uC(rng);
    CauchyData data = random_pair(rng, 3.0, 2.0);
    const double x0 = data.x[0] - data.x[1];
    if (std::abs(x0) < 0.05 || std::abs(x0 * x0 - C) < 0.05) continue;
    const auto r = compare_poly2(C, data, {-10.0, 10.0, 0.01}, 512);
    worst.position = std::max(worst.position, r.position);
    worst.event_time = std::max(worst.event_time, r.event_time);
    worst.count_mismatches += r.count_mismatches;
    worst.samples += r.samples;
    worst.events += r.events;
    ++runs;
  }
  const std::string what = std::to_string(runs) + " random (C, x0, v), t in [-10, 10]";
  rep.rows.push_back(row("random: max |x_tracked - x_closed|", worst.position, 1e-9,
                         what + ", " + std::to_string(worst.samples) + " samples (x12^2 < 1e-6 skipped)"));
  rep.rows.push_back(row("random: max |t_event - zero of x12^2|", worst.event_time, 1e-8,
                         std::to_string(worst.events) + " predicted events"));
  rep.rows.push_back(count_row("random: runs with a wrong event count", worst.count_mismatches, 0));

  // The worked two-body case.
  CauchyData unit;
  unit.x = RVector(2);
  unit.v = RVector(2);
  unit.x << 0.5, -0.5;
  unit.v << 1.0, -1.0;
  TrackerOptions opts;
  opts.roots.n_scan = 512;
  const Tracks tr = track(PolynomialProduct{2.0}, cauchy_poly2(2.0, unit), Dispersion::Quadratic, {-1, 2, 0.01}, opts);
  std::vector<double> times;
  for (const auto& e : tr.events) times.push_back(e.t);
  rep.rows.push_back(count_row("x0=1, v12=2, C=2: event count", static_cast<long>(times.size()), 2));
  if (times.size() == 2) {
    const double a = 0.5 * (1 - std::sqrt(2.0)), b = 0.5 * (1 + std::sqrt(2.0));
    rep.rows.push_back(row("x0=1, v12=2, C=2: |t - (1 -+ sqrt 2)/2|",
                           std::max(std::abs(times[0] - a), std::abs(times[1] - b)), 1e-8,
                           "tracked " + format_real(times[0]) + ", " + format_real(times[1])));
    const auto printed = [&](double t) { return poly2_closed_form_printed(2.0, unit, t).x12_sq; };
    rep.rows.push_back(info_row("x0=1, v12=2, C=2: printed coefficient (C v12 t)^2",
                                std::max(std::abs(times[0] + 1.0 / 6.0), std::abs(times[1] - 0.5)),
                                "zeros of 1+4t-12t^2 are -1/6 and 1/2; that form gives x12^2 = " +
                                    format_real(printed(times[0])) + " and " + format_real(printed(times[1])) +
                                    " at the tracked events"));
  }

  // Shipped two-body polynomial configs with Cauchy data.
  for (const char* sub : {"figures", "regimes"}) {
    for (const auto& c : configs_in(root, sub)) {
      const auto* m = std::get_if<PolynomialProduct>(&c.model);
      if (!m || !c.cauchy || c.cauchy->x.size() != 2 || polynomial_constant(*m, 2) != 0.25 * m->C) continue;
      const auto r = compare_poly2(m->C, *c.cauchy, c.time, c.n_scan);
      rep.rows.push_back(row(c.name + ": max position error", r.position, 1e-9));
      rep.rows.push_back(row(c.name + ": max event time error", r.event_time, 1e-8));
      rep.rows.push_back(count_row(c.name + ": event count mismatches", r.count_mismatches, 0));
    }
  }
}

// ----------------------------------------------------------------- projection

struct ProjectionCompare {
  double error = 0.0;
  int mismatches = 0;
  int taus = 0;
  int comparisons = 0;
};

ProjectionCompare compare_projection(LaxKind kind, double gamma, const PhasePoint& point0,
                                     const std::vector<double>& ts, int n_scan) {
  const ModelSpec model = kind == LaxKind::CM ? ModelSpec{CharacteristicCM{gamma}} : ModelSpec{CharacteristicRS{gamma}};
  const Dispersion d = Dispersion::Quadratic;
  TrackerOptions opts;
  opts.roots.n_scan = n_scan;
  const auto n = static_cast<size_t>(point0.size());
  std::vector<double> taus;
  for (double tau = -40.0; tau <= 40.0; tau += 5.0) {
    if (snapshot(model, point0, d, tau, opts).entries.size() == n) taus.push_back(tau);
  }
  ProjectionCompare out;
  if (taus.empty()) {
    out.mismatches = 1;
    return out;
  }
  std::vector<double> chosen = {taus.front(), taus[taus.size() / 2], taus.back()};
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  std::vector<std::vector<double>> tracked;
  for (double t : ts) tracked.push_back(snapshot(model, point0, d, t, opts).positions(std::nullopt));
  for (double tau : chosen) {
    const PhasePoint at = evolve(point0, d, tau);
    const auto xs = snapshot(model, point0, d, tau, opts).positions(std::nullopt);
    RVector x(static_cast<Index>(n)), v(static_cast<Index>(n));
    for (size_t i = 0; i < n; ++i) {
      x[static_cast<Index>(i)] = xs[i];
      v[static_cast<Index>(i)] = implied_velocity(model, d, at, xs[i]);
    }
    const RMatrix L = build_L(kind, x, v, gamma);
    ++out.taus;
    for (size_t k = 0; k < ts.size(); ++k) {
      const auto expected = projection_roots(x, L, ts[k] - tau);
      ++out.comparisons;
      if (expected.size() != tracked[k].size()) {
        ++out.mismatches;
        continue;
      }
      for (size_t i = 0; i < expected.size(); ++i) out.error = std::max(out.error, std::abs(expected[i] - tracked[k][i]));
    }
  }
  return out;
}

void suite_projection(const fs::path& root, SuiteReport& rep) {
  std::mt19937_64 rng(202);
  const auto ts = linspace(-6.0, 6.0, 10);
  for (const auto kind : {LaxKind::CM, LaxKind::RS}) {
    for (const Index n : {Index(2), Index(3)}) {
      std::uniform_real_distribution<double> ua(-2.0, 2.0), up(-1.5, 1.5), ug(0.5, 1.5);
      ProjectionCompare worst;
      int configs = 0;
      while (configs < 20) {
        RVector a(n), p(n);
        for (Index i = 0; i < n; ++i) {
          a[i] = ua(rng);
          p[i] = up(rng);
        }
        bool separated = true;
        for (Index i = 0; i < n; ++i) {
          for (Index j = i + 1; j < n; ++j) separated = separated && std::abs(p[i] - p[j]) > 0.3;
        }
        if (!separated) continue;
        const auto r = compare_projection(kind, ug(rng), PhasePoint::real(a, p), ts, 1024);
        worst.error = std::max(worst.error, r.error);
        worst.mismatches += r.mismatches;
        worst.taus += r.taus;
        worst.comparisons += r.comparisons;
        ++configs;
      }
      const std::string tag = std::string(kind == LaxKind::CM ? "CM" : "RS") + " N=" + std::to_string(n);
      rep.rows.push_back(row(tag + ": max |root - projection root|", worst.error, 1e-8,
                             "20 random configs, " + std::to_string(worst.comparisons) + " (tau, t) pairs"));
      rep.rows.push_back(count_row(tag + ": root count mismatches", worst.mismatches, 0));
    }
  }
  for (const auto& c : configs_in(root, "lax")) {
    const bool cm = std::holds_alternative<CharacteristicCM>(c.model);
    if (!cm && !std::holds_alternative<CharacteristicRS>(c.model)) continue;
    const double gamma = cm ? std::get<CharacteristicCM>(c.model).gamma : std::get<CharacteristicRS>(c.model).gamma;
    const auto r = compare_projection(cm ? LaxKind::CM : LaxKind::RS, gamma, initial_point(c),
                                      linspace(c.time.t0, c.time.t1, 10), c.n_scan);
    rep.rows.push_back(row(c.name + ": max |root - projection root|", r.error, 1e-8));
    rep.rows.push_back(count_row(c.name + ": root count mismatches", r.mismatches, 0));
  }
}

// -------------------------------------------------------------- eom-residuals

struct ResidualScan {
  double worst = 0.0;
  int probes = 0;
};

ResidualScan scan_residual(const RunConfig& c, EomKind kind, const std::function<bool(const EomState&)>& usable,
                           const std::function<void(EomState&)>& fill, int n_probes = 9) {
  const PhasePoint pt = initial_point(c);
  const Sampler sample = make_sampler(c.model, pt, c.dispersion, tracker_options(c));
  ResidualScan out;
  const double margin = 0.05 * (c.time.t1 - c.time.t0);
  for (double t : linspace(c.time.t0 + margin, c.time.t1 - margin, n_probes)) {
    auto s = probe_state(sample, t, 2);
    if (!s || !usable(*s)) continue;
    fill(*s);
    out.worst = std::max(out.worst, residual_eom(kind, *s));
    ++out.probes;
  }
  return out;
}

void add_residual_row(SuiteReport& rep, const std::string& name, const ResidualScan& r, double tol) {
  if (r.probes == 0) {
    rep.rows.push_back(info_row(name, 0.0, "no probe time away from events"));
    return;
  }
  rep.rows.push_back(row(name, r.worst, tol, std::to_string(r.probes) + " probe times"));
}

void suite_eom(const fs::path& root, SuiteReport& rep) {
  std::vector<RunConfig> all;
  for (const char* sub : {"figures", "regimes", "relativistic"}) {
    for (auto& c : configs_in(root, sub)) all.push_back(std::move(c));
  }

  // Two-body polynomial, quarter convention.
  ResidualScan poly;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> uC(-4.0, 4.0);
  std::vector<RunConfig> poly_runs;
  for (const auto& c : all) {
    const auto* m = std::get_if<PolynomialProduct>(&c.model);
    if (m && initial_point(c).size() == 2 && polynomial_constant(*m, 2) == 0.25 * m->C) poly_runs.push_back(c);
  }
  for (int k = 0; k < 20; ++k) {
    RunConfig c;
    c.name = "random";
    c.model = PolynomialProduct{uC(rng)};
    c.cauchy = random_pair(rng, 3.0, 1.5);
    const double x0 = c.cauchy->x[0] - c.cauchy->x[1], C = std::get<PolynomialProduct>(c.model).C;
    if (std::abs(x0) < 0.1 || std::abs(x0 * x0 - C) < 0.1) continue;
    c.time = {-4.0, 4.0, 0.05};
    c.n_scan = 512;
    poly_runs.push_back(c);
  }
  for (const auto& c : poly_runs) {
    const double C = std::get<PolynomialProduct>(c.model).C;
    const auto r = scan_residual(
        c, EomKind::Polynomial2,
        [&](const EomState& s) {
          const double x12 = s.x[0] - s.x[1];
          return std::abs(x12 * x12 - C) > 0.05;
        },
        [&](EomState& s) { s.C = C; });
    poly.worst = std::max(poly.worst, r.worst);
    poly.probes += r.probes;
  }
  add_residual_row(rep, "polynomial pair: max |a - force|", poly, 1e-5);

  ResidualScan sinh;
  for (const auto& c : all) {
    const auto* m = std::get_if<SinhPair>(&c.model);
    if (!m) continue;
    const double C = m->C;
    const auto r = scan_residual(
        c, EomKind::Sinh2,
        [&](const EomState& s) {
          const double ch = std::cosh(s.x[0] - s.x[1]) - 2.0 * C;
          return std::abs(ch * ch - 1.0) > 0.05;
        },
        [&](EomState& s) {
          // Ascending order from the sampler; the force is written for x1 > x2 or x1 < x2 alike.
          s.C = C;
        });
    sinh.worst = std::max(sinh.worst, r.worst);
    sinh.probes += r.probes;
  }
  add_residual_row(rep, "sinh pair: max |a - force|", sinh, 1e-5);

  ResidualScan rel;
  for (const auto& c : all) {
    const auto* m = std::get_if<RelativisticPair>(&c.model);
    if (!m || c.frame != Frame::Native) continue;
    const double C = m->C;
    const auto r = scan_residual(
        c, EomKind::Relativistic2,
        [&](const EomState& s) {
          const double x12 = s.x[0] - s.x[1];
          return std::abs(x12 * x12 + C * (s.v[0] + s.v[1])) > 0.05;
        },
        [&](EomState& s) { s.C = C; });
    rel.worst = std::max(rel.worst, r.worst);
    rel.probes += r.probes;
  }
  add_residual_row(rep, "relativistic pair (cone variables): max |a - force|", rel, 1e-5);

  ResidualScan sg;
  for (const auto& c : all) {
    if (!std::holds_alternative<SinhGordonDeterminant>(c.model) || c.frame != Frame::Lab) continue;
    const PhasePoint pt = initial_point(c);
    if (pt.size() != 2) continue;
    // Centre-of-mass states: p2 = 1/p1 (breather: |p| = 1).
    if (std::abs(pt.p[0] * pt.p[1] - 1.0) > 1e-12) continue;
    // The interaction coefficient ((p1 - p2)/(p1 + p2))^2 is negative for a breather.
    const Complex ratio = (pt.p[0] - pt.p[1]) / (pt.p[0] + pt.p[1]);
    const int eps = pt.epsilon[0] * pt.epsilon[1] * ((ratio * ratio).real() < 0.0 ? -1 : 1);
    const auto r = scan_residual(
        c, EomKind::SinhGordon2, [](const EomState& s) { return std::abs(s.x[0] - s.x[1]) > 0.05; },
        [&](EomState& s) { s.epsilon = eps; });
    sg.worst = std::max(sg.worst, r.worst);
    sg.probes += r.probes;
    if (r.probes > 0) {
      // The relation with the printed coefficients, for comparison only.
      const Sampler sample = make_sampler(c.model, pt, c.dispersion, tracker_options(c));
      double printed = 0.0;
      int undefined = 0;
      for (double t : linspace(c.time.t0 + 1.0, c.time.t1 - 1.0, 5)) {
        auto s = probe_state(sample, t, 2, 0.05);
        if (!s) continue;
        s->epsilon = eps;
        const double v = sinh_gordon2_printed_residual(*s);
        if (std::isfinite(v)) {
          printed = std::max(printed, v);
        } else {
          ++undefined;
        }
      }
      rep.rows.push_back(info_row(c.name + ": pair relation with printed coefficients", printed,
                                  "residual of Y = 4 eps/(cosh(4 x12 sqrt(1+Y)/R) - eps); undefined at " +
                                      std::to_string(undefined) + " probes"));
    }
  }
  add_residual_row(rep, "sinh-gordon pair, centre of mass: max relation residual", sg, 1e-4);
}

// -------------------------------------------------------------- conservation

std::vector<Complex> sorted_velocities(const PhasePoint& p, Dispersion d) {
  std::vector<Complex> out;
  for (Index i = 0; i < p.size(); ++i) out.push_back(velocity(d, p.p[i]));
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void suite_conservation(const fs::path& root, SuiteReport& rep) {
  std::vector<RunConfig> all;
  for (const char* sub : {"figures", "regimes", "lax", "relativistic"}) {
    for (auto& c : configs_in(root, sub)) all.push_back(std::move(c));
  }

  // Induced Hamiltonian along two-body polynomial motions.
  double h_drift = 0.0, h_free = 0.0;
  int h_runs = 0;
  for (const auto& c : all) {
    const auto* m = std::get_if<PolynomialProduct>(&c.model);
    if (!m) continue;
    const PhasePoint pt = initial_point(c);
    if (pt.size() != 2 || polynomial_constant(*m, 2) != 0.25 * m->C) continue;
    const Sampler sample = make_sampler(c.model, pt, c.dispersion, tracker_options(c));
    const double free_energy = hamiltonian(pt, c.dispersion);
    std::vector<double> hs;
    for (double t : linspace(c.time.t0 + 0.5, c.time.t1 - 0.5, 15)) {
      auto s = probe_state(sample, t, 2, 0.05);
      if (!s) continue;
      const double x12 = s->x[0] - s->x[1];
      if (std::abs(x12 * x12 - m->C) < 0.05) continue;
      hs.push_back(induced_hamiltonian_p9(s->x, conjugate_momenta_p8(s->x, s->v, m->C), m->C));
      if (hs.size() == 5) break;
    }
    if (hs.size() < 2) continue;
    const double scale = std::max(1.0, std::abs(hs.front()));
    for (double h : hs) {
      h_drift = std::max(h_drift, std::abs(h - hs.front()) / scale);
      h_free = std::max(h_free, std::abs(h - free_energy) / scale);
    }
    ++h_runs;
  }
  rep.rows.push_back(row("two-body H: max relative drift over 5 probe times", h_drift, 1e-9,
                         std::to_string(h_runs) + " polynomial configs"));
  rep.rows.push_back(row("two-body H vs sum p^2/2 of the phase point", h_free, 1e-9));

  // Momenta re-solved from (x, v) at five times.
  int unresolved = 0;
  for (const auto& c : all) {
    const PhasePoint pt = initial_point(c);
    const auto n = static_cast<size_t>(pt.size());
    if (n > 3) continue;
    const auto reference = sorted_velocities(pt, c.dispersion);
    TrackerOptions opts = tracker_options(c);
    opts.frame = Frame::Native;
    const Sampler sample = make_sampler(c.model, pt, c.dispersion, opts);
    int probes = 0;
    double drift = 0.0;
    for (double t : linspace(c.time.t0 + 0.5, c.time.t1 - 0.5, 21)) {
      if (sample(t - kEventMargin).entries.size() != n || sample(t + kEventMargin).entries.size() != n) continue;
      auto xs = sample(t).positions(std::nullopt);
      if (xs.size() != n) continue;
      std::sort(xs.begin(), xs.end());
      bool apart = true;
      for (size_t i = 1; i < n; ++i) apart = apart && xs[i] - xs[i - 1] > 0.05;
      if (!apart) continue;
      // Velocities of the tracked roots, from the implicit function theorem.
      const PhasePoint now = evolve(pt, c.dispersion, t);
      CauchyData data;
      data.x = RVector(static_cast<Index>(n));
      data.v = RVector(static_cast<Index>(n));
      for (size_t i = 0; i < n; ++i) {
        data.x[static_cast<Index>(i)] = xs[i];
        data.v[static_cast<Index>(i)] = implied_velocity(c.model, c.dispersion, now, xs[i]);
      }
      data.t_ref = t;
      CauchyOptions co;
      co.epsilon = pt.epsilon;
      std::vector<PhasePoint> sols;
      try {
        sols = solve_cauchy_all(c.model, c.dispersion, data, co);
      } catch (const Error&) {
        ++unresolved;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (const auto& sp : sols) best = std::min(best, multiset_distance(sorted_velocities(sp, c.dispersion), reference));
      drift = std::max(drift, best);
      if (++probes == 5) break;
    }
    if (probes == 0) continue;
    rep.rows.push_back(row(c.name + ": re-solved momenta, max drift", drift, 1e-8,
                           std::to_string(probes) + " probe times, compared through h'(p)"));
  }
  rep.rows.push_back(count_row("probe times where the Cauchy problem failed", unresolved, 0));
}

// ------------------------------------------------------------------- regimes

void suite_regimes(const fs::path& root, SuiteReport& rep) {
  std::map<std::string, int> per_model;
  for (const auto& c : configs_in(root, "regimes")) {
    if (!c.cauchy) continue;
    const Regime predicted = regime_classify(c.model, *c.cauchy);
    if (c.expect.regime) {
      const bool same = regime_from_string(*c.expect.regime) == predicted;
      rep.rows.push_back({c.name + ": classification", same ? 0.0 : 1.0, 0.0, same, false,
                          "classified " + std::string(to_string(predicted)) + ", labelled " + *c.expect.regime});
    }
    const Tracks tr = run(c);
    const EventPattern seen = observed_pattern(tr.events);
    const EventPattern want = expected_pattern(predicted);
    rep.rows.push_back({c.name + ": event pattern", seen == want ? 0.0 : 1.0, 0.0, seen == want, false,
                        std::string(to_string(predicted)) + " predicts " + std::string(to_string(want)) + ", tracked " +
                            std::string(to_string(seen)) + " (" + std::to_string(tr.events.size()) + " events)"});
    ++per_model[std::string(model_name(c.model))];
  }
  for (const char* m : {"polynomial", "sinh_pair"}) {
    const int n = per_model.count(m) ? per_model[m] : 0;
    rep.rows.push_back({std::string(m) + ": sweep size", static_cast<double>(n), 9.0, n >= 9, false,
                        "at least 9 configs required"});
  }
}

// --------------------------------------------------------------------- boost

void suite_boost(const fs::path& root, SuiteReport& rep) {
  const auto configs = configs_in(root, "relativistic");
  for (const auto& c : configs) {
    if (!std::holds_alternative<SinhGordonDeterminant>(c.model) || c.frame != Frame::Lab) continue;
    const Tracks tr = run(c);
    double worst = 0.0;
    size_t segments = 0;
    for (const auto& line : tr.lines) {
      for (size_t k = 0; k + 1 < line.samples.size(); ++k) {
        const auto& a = line.samples[k];
        const auto& b = line.samples[k + 1];
        bool near = false;
        for (const auto& e : tr.events) {
          if (e.kind != EventKind::Crossing) continue;
          near = near || std::abs(e.t - a.t) < 10 * c.time.dt || std::abs(e.t - b.t) < 10 * c.time.dt;
        }
        if (near) continue;
        worst = std::max(worst, std::abs((b.x - a.x) / (b.t - a.t)));
        ++segments;
      }
    }
    rep.rows.push_back(row(c.name + ": max |dx/dt| - 1 in the lab frame", worst - 1.0, 1e-6,
                           std::to_string(segments) + " segments away from crossings"));
  }
  for (const auto& c : configs) {
    if (!is_relativistic(c.model)) continue;
    const PhasePoint pt = initial_point(c);
    for (double lambda : {0.5, 2.0, 3.0}) {
      const double dev = boost_covariance_check(c.model, pt, lambda, {-3.0, -1.0, 0.5, 2.0});
      char name[64];
      std::snprintf(name, sizeof name, ": boost lambda=%g, max deviation", lambda);
      rep.rows.push_back(row(c.name + name, dev, 1e-9));
    }
  }
}

// --------------------------------------------------------------- asymptotics

void suite_asymptotics(const fs::path& root, SuiteReport& rep) {
  const auto report = [&](const std::string& name, const ModelSpec& m, const PhasePoint& pt) {
    const auto r = asymptotic_check(m, pt, Dispersion::Quadratic);
    double worst = 0.0;
    std::string detail = "r =";
    for (double d : r.deviations) detail += " " + format_real(d);
    for (double q : r.ratios) worst = std::max(worst, std::abs(q / 2.0 - 1.0));
    rep.rows.push_back(row(name + ": max |ratio/2 - 1|", worst, 0.15, detail));
  };
  for (const auto& c : configs_in(root, "lax")) {
    if (!std::holds_alternative<CharacteristicCM>(c.model)) continue;
    const PhasePoint pt = initial_point(c);
    if (pt.size() != 2) continue;
    report(c.name, c.model, pt);
  }
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> ua(-2.0, 2.0), up(0.4, 1.5), ug(0.3, 1.2);
  for (int k = 0; k < 5; ++k) {
    RVector a(2), p(2);
    a << ua(rng), ua(rng);
    p << up(rng), -up(rng);
    report("random CM N=2 #" + std::to_string(k), CharacteristicCM{ug(rng)}, PhasePoint::real(a, p));
  }
}

// ------------------------------------------------------------------- figures

// Largest normalised autocorrelation of a mean-free signal at a lag beyond
// its first zero crossing.
double autocorrelation_peak(const std::vector<double>& s) {
  const size_t n = s.size();
  if (n < 16) return 0.0;
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) d[i] = s[i] - mean;
  const auto ac = [&](size_t lag) {
    double num = 0.0, e0 = 0.0, e1 = 0.0;
    for (size_t i = 0; i + lag < n; ++i) {
      num += d[i] * d[i + lag];
      e0 += d[i] * d[i];
      e1 += d[i + lag] * d[i + lag];
    }
    return e0 > 0 && e1 > 0 ? num / std::sqrt(e0 * e1) : 0.0;
  };
  size_t lag = 1;
  while (lag < n / 2 && ac(lag) > 0.0) ++lag;
  double peak = 0.0;
  for (; lag < n / 2; ++lag) peak = std::max(peak, ac(lag));
  return peak;
}

void suite_figures(const fs::path& root, SuiteReport& rep) {
  for (const auto& c : configs_in(root, "figures")) {
    const Tracks tr = run(c);
    const auto& e = c.expect;
    const int creations = event_count(tr, EventKind::Creation);
    const int annihilations = event_count(tr, EventKind::Annihilation);
    const int crossings = event_count(tr, EventKind::Crossing);
    if (e.lines) rep.rows.push_back(count_row(c.name + ": world lines", static_cast<long>(tr.lines.size()), *e.lines));
    if (e.spanning_lines) {
      long spanning = 0;
      for (const auto& l : tr.lines) spanning += !l.birth && !l.death;
      rep.rows.push_back(count_row(c.name + ": lines without birth or death", spanning, *e.spanning_lines));
    }
    if (e.creations) rep.rows.push_back(count_row(c.name + ": creations", creations, *e.creations));
    if (e.annihilations) rep.rows.push_back(count_row(c.name + ": annihilations", annihilations, *e.annihilations));
    if (e.min_events) {
      const int n = creations + annihilations;
      rep.rows.push_back({c.name + ": creations + annihilations", static_cast<double>(n), static_cast<double>(*e.min_events),
                          n >= *e.min_events, false, "at least " + std::to_string(*e.min_events) + " required"});
    }
    if (e.crossings) rep.rows.push_back(count_row(c.name + ": crossings", crossings, *e.crossings));
    if (e.min_crossings) {
      rep.rows.push_back({c.name + ": crossings", static_cast<double>(crossings), static_cast<double>(*e.min_crossings),
                          crossings >= *e.min_crossings, false, "at least " + std::to_string(*e.min_crossings) + " required"});
    }
    if (e.factors_with_roots) {
      std::vector<int> seen;
      for (const auto& l : tr.lines) {
        const int f = l.factor.value_or(0);
        if (std::find(seen.begin(), seen.end(), f) == seen.end()) seen.push_back(f);
      }
      rep.rows.push_back(count_row(c.name + ": factors carrying lines", static_cast<long>(seen.size()), *e.factors_with_roots));
    }
    if (e.max_roots || e.min_roots) {
      std::map<double, int> alive;
      for (const auto& l : tr.lines) {
        for (const auto& s : l.samples) ++alive[s.t];
      }
      int lo = std::numeric_limits<int>::max(), hi = 0;
      for (double t : c.time.times()) {
        const int m = alive.count(t) ? alive[t] : 0;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      if (e.max_roots) rep.rows.push_back(count_row(c.name + ": largest root count", hi, *e.max_roots));
      if (e.min_roots) rep.rows.push_back(count_row(c.name + ": smallest root count", lo, *e.min_roots));
    }
    if (e.pattern) {
      const std::string seen(to_string(observed_pattern(tr.events)));
      rep.rows.push_back({c.name + ": event pattern", seen == *e.pattern ? 0.0 : 1.0, 0.0, seen == *e.pattern, false,
                          "tracked " + seen + ", expected " + *e.pattern});
    }
    if (e.periodic_separation) {
      double peak = 0.0;
      if (tr.lines.size() == 2) {
        std::map<double, double> a, b;
        for (const auto& s : tr.lines[0].samples) a[s.t] = s.x;
        for (const auto& s : tr.lines[1].samples) b[s.t] = s.x;
        std::vector<double> sep;
        for (double t : c.time.times()) {
          if (a.count(t) && b.count(t)) sep.push_back(a[t] - b[t]);
        }
        peak = autocorrelation_peak(sep);
      }
      rep.rows.push_back({c.name + ": autocorrelation peak of x1 - x2", peak, 0.9, peak >= 0.9, false,
                          "periodic separation needs a peak of at least 0.9"});
    }
  }
}

// -------------------------------------------------------------------- cauchy

struct Family {
  std::string name;
  std::function<std::pair<ModelSpec, PhasePoint>(std::mt19937_64&)> draw;
};

void suite_cauchy(const fs::path&, SuiteReport& rep) {
  std::mt19937_64 rng(909);
  const auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const auto sign = [&]() { return U(0, 1) < 0.5 ? -1 : 1; };

  const std::vector<Family> families = {
      {"flat (polynomial N=2,3, sinh pair)",
       [&](std::mt19937_64&) -> std::pair<ModelSpec, PhasePoint> {
         const int kind = static_cast<int>(U(0, 3));
         if (kind == 0) {
           RVector q(2), p(2);
           q << U(-2, 2), U(-2, 2);
           p << U(-1, 1), U(-1, 1);
           return {PolynomialProduct{U(-3, 3)}, PhasePoint::real(q, p)};
         }
         if (kind == 1) {
           RVector q(3), p(3);
           q << U(-2, 2), U(-2, 2), U(-2, 2);
           p << U(-1, 1), U(-1, 1), U(-1, 1);
           return {PolynomialProduct{U(-1, 1), Normalization::Plain}, PhasePoint::real(q, p)};
         }
         RVector q(2), p(2);
         q << U(-1.5, 1.5), U(-1.5, 1.5);
         p << U(-1, 1), U(-1, 1);
         return {SinhPair{U(-1, 1)}, PhasePoint::real(q, p)};
       }},
      {"soliton determinants (KdV N=1,2,3, sinh-gordon N=2)",
       [&](std::mt19937_64&) -> std::pair<ModelSpec, PhasePoint> {
         const int kind = static_cast<int>(U(0, 4));
         if (kind == 3) {
           CVector q(2), p(2);
           q << U(-1, 1), U(-1, 1);
           p << U(0.4, 2.0), U(0.4, 2.0);
           return {SinhGordonDeterminant{}, PhasePoint::make(q, p, {}, {sign(), sign()})};
         }
         const Index n = kind + 1;
         CVector q(n), p(n);
         std::vector<int> eps;
         for (Index i = 0; i < n; ++i) {
           q[i] = U(-2, 2);
           p[i] = U(0.4, 1.6);
           eps.push_back(sign());
         }
         return {KdVDeterminant{}, PhasePoint::make(q, p, {}, eps)};
       }},
      {"characteristic (CM, RS; N=2,3)",
       [&](std::mt19937_64&) -> std::pair<ModelSpec, PhasePoint> {
         const Index n = U(0, 1) < 0.5 ? 2 : 3;
         RVector q(n), p(n);
         for (Index i = 0; i < n; ++i) {
           q[i] = U(-3, 3);
           p[i] = -1.5 + 3.0 * (static_cast<double>(i) + U(0.2, 0.8)) / static_cast<double>(n);
         }
         const double g = U(0.3, 1.0);
         return {U(0, 1) < 0.5 ? ModelSpec{CharacteristicCM{g}} : ModelSpec{CharacteristicRS{g}}, PhasePoint::real(q, p)};
       }},
  };

  for (const auto& fam : families) {
    double x_err = 0.0, v_err = 0.0;
    int states = 0, failures = 0, ambiguous = 0, attempts = 0;
    while (states < 50 && attempts < 5000) {
      ++attempts;
      auto [model, point0] = fam.draw(rng);
      const Dispersion d = default_dispersion(model);
      const double tau = U(-3, 3);
      const PhasePoint pt = evolve(point0, d, tau);
      RootFindOptions ro;
      ro.window = default_window(model, pt);
      ro.n_scan = 2048;
      RootSet rs;
      try {
        rs = find_real_roots(model, pt, ro);
      } catch (const Error&) {
        continue;
      }
      const auto n = static_cast<size_t>(pt.size());
      if (rs.count() != n) continue;
      CauchyData data;
      data.x = RVector(static_cast<Index>(n));
      data.v = RVector(static_cast<Index>(n));
      bool ok = true;
      for (size_t i = 0; i < n; ++i) {
        data.x[static_cast<Index>(i)] = rs.roots[i].x;
        if (i > 0 && rs.roots[i].x - rs.roots[i - 1].x < 0.05) ok = false;
        try {
          data.v[static_cast<Index>(i)] = implied_velocity(model, d, pt, rs.roots[i].x);
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok || data.v.cwiseAbs().maxCoeff() > 20.0) continue;
      data.t_ref = tau;
      ++states;
      CauchyOptions co;
      co.epsilon = pt.epsilon;
      std::vector<PhasePoint> sols;
      try {
        sols = solve_cauchy_all(model, d, data, co);
      } catch (const Error&) {
        ++failures;
        continue;
      }
      if (sols.size() > 1) ++ambiguous;
      for (const auto& s : sols) {
        RootFindOptions so;
        so.window = default_window(model, s);
        so.n_scan = 2048;
        const auto back = find_real_roots(model, s, so);
        if (back.count() != n) {
          ++failures;
          continue;
        }
        for (size_t i = 0; i < n; ++i) {
          x_err = std::max(x_err, std::abs(back.roots[i].x - data.x[static_cast<Index>(i)]));
          v_err = std::max(v_err, std::abs(implied_velocity(model, d, s, back.roots[i].x) - data.v[static_cast<Index>(i)]));
        }
      }
    }
    rep.rows.push_back(count_row(fam.name + ": consistent states drawn", states, 50));
    rep.rows.push_back(row(fam.name + ": max |x - x_in|", x_err, 1e-9));
    rep.rows.push_back(row(fam.name + ": max |v - v_in|", v_err, 1e-8));
    rep.rows.push_back(count_row(fam.name + ": states not reproduced", failures, 0));
    rep.rows.push_back(info_row(fam.name + ": states with several solutions", ambiguous,
                                "every solution is checked"));
  }
}

using SuiteFn = void (*)(const fs::path&, SuiteReport&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"closed-form", suite_closed_form}, {"projection", suite_projection},     {"eom-residuals", suite_eom},
      {"conservation", suite_conservation}, {"regimes", suite_regimes},        {"boost", suite_boost},
      {"asymptotics", suite_asymptotics},   {"figures", suite_figures},        {"cauchy", suite_cauchy},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const fs::path& configs_dir) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    SuiteReport rep;
    rep.suite = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(configs_dir, rep);
    } catch (const Error& e) {
      rep.rows.push_back({"suite aborted", 1.0, 0.0, false, false, e.what()});
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  throw Error(ErrorCode::ConfigError, "unknown suite '" + name + "'");
}

std::string format_report(const SuiteReport& r) {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "== %s (%.2f s): %s\n", r.suite.c_str(), r.seconds, r.passed() ? "PASS" : "FAIL");
  out += buf;
  for (const auto& row : r.rows) {
    const char* tag = row.informational ? "info" : row.pass ? "pass" : "FAIL";
    std::snprintf(buf, sizeof buf, "  [%s] ", tag);
    out += buf;
    out += row.check + ": measured " + format_real(row.measured) + ", tolerance " + format_real(row.tolerance);
    if (!row.detail.empty()) out += " (" + row.detail + ")";
    out += "\n";
  }
  return out;
}

nlohmann::json report_json(const SuiteReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"check", row.check},
                    {"measured", row.measured},
                    {"tolerance", row.tolerance},
                    {"pass", row.pass},
                    {"informational", row.informational},
                    {"detail", row.detail}});
  }
  return {{"suite", r.suite}, {"pass", r.passed()}, {"seconds", r.seconds}, {"rows", rows}};
}

}  // namespace induced
