#include "induced/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "induced/linalg.hpp"

namespace induced {

namespace {

struct Pair {
  double x0 = 0.0, v = 0.0, sum = 0.0, vsum = 0.0;
};

Pair pair_of(const CauchyData& data) {
  if (data.x.size() != 2 || data.v.size() != 2) throw Error(ErrorCode::DegenerateData, "N = 2 data expected");
  return {data.x[0] - data.x[1], data.v[0] - data.v[1], data.x.sum(), data.v.sum()};
}

void require_size(const EomState& s, Index n) {
  if (s.x.size() != n || s.v.size() != n || s.a.size() != n) {
    throw Error(ErrorCode::DomainError, "state has the wrong number of particles");
  }
}

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

Poly2State poly2_closed_form(double C, const CauchyData& data, double t) {
  const Pair d = pair_of(data);
  const double den = d.x0 * d.x0 - C;
  if (den == 0.0) throw Error(ErrorCode::DegenerateData, "x0_12^2 = C");
  const double lin = d.x0 + d.v * t;
  return {d.sum + d.vsum * t, lin * lin + C * d.v * d.v * t * t / den};
}

Poly2State poly2_closed_form_printed(double C, const CauchyData& data, double t) {
  const Pair d = pair_of(data);
  const double den = d.x0 * d.x0 - C;
  if (den == 0.0) throw Error(ErrorCode::DegenerateData, "x0_12^2 = C");
  const double lin = d.x0 + d.v * t;
  const double cvt = C * d.v * t;
  return {d.sum + d.vsum * t, lin * lin + cvt * cvt / den};
}

std::vector<double> poly2_event_times(double C, const CauchyData& data) {
  const Pair d = pair_of(data);
  const double den = d.x0 * d.x0 - C;
  if (den == 0.0) throw Error(ErrorCode::DegenerateData, "x0_12^2 = C");
  // x12^2(t) = A t^2 + B t + x0^2
  const double A = d.v * d.v * d.x0 * d.x0 / den, B = 2.0 * d.x0 * d.v, c0 = d.x0 * d.x0;
  if (A == 0.0) {
    if (B == 0.0) return {};
    return {-c0 / B};
  }
  const double disc = B * B - 4.0 * A * c0;
  if (disc < 0.0) return {};
  // Numerically stable pair of zeros.
  const double qq = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  std::vector<double> out{qq / A, qq != 0.0 ? c0 / qq : qq / A};
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> poly2_roots(double C, const CauchyData& data, double t) {
  const Poly2State s = poly2_closed_form(C, data, t);
  if (s.x12_sq < 0.0) return {};
  const double h = 0.5 * std::sqrt(s.x12_sq);
  return {0.5 * s.sum - h, 0.5 * s.sum + h};
}

std::string_view to_string(EomKind kind) noexcept {
  switch (kind) {
    case EomKind::Polynomial2: return "polynomial2";
    case EomKind::Sinh2: return "sinh2";
    case EomKind::Relativistic2: return "relativistic2";
    case EomKind::SinhGordon2: return "sinh_gordon2";
    case EomKind::CalogeroMoser: return "calogero_moser";
    case EomKind::RuijsenaarsSchneider: return "ruijsenaars_schneider";
  }
  return "unknown";
}

double residual_eom(EomKind kind, const EomState& s) {
  switch (kind) {
    case EomKind::Polynomial2: {
      require_size(s, 2);
      const double x12 = s.x[0] - s.x[1], v12 = s.v[0] - s.v[1], a12 = s.a[0] - s.a[1];
      const double rhs = s.C * v12 * v12 / (x12 * (x12 * x12 - s.C));
      return std::max(std::abs(s.a[0] + s.a[1]), std::abs(a12 - rhs));
    }
    case EomKind::Sinh2: {
      require_size(s, 2);
      const double x12 = s.x[0] - s.x[1], v12 = s.v[0] - s.v[1];
      const double c = std::cosh(x12), C = s.C;
      const double k = C * v12 * v12 * (c * c - 2.0 * C * c + 1.0) / (std::sinh(x12) * ((c - 2.0 * C) * (c - 2.0 * C) - 1.0));
      return std::max(std::abs(s.a[0] - k), std::abs(s.a[1] + k));
    }
    case EomKind::Relativistic2: {
      require_size(s, 2);
      const double x12 = s.x[0] - s.x[1], v12 = s.v[0] - s.v[1], vs = s.v[0] + s.v[1];
      const double k = s.C * v12 * v12 * vs / (2.0 * x12 * (x12 * x12 + s.C * vs));
      return std::max(std::abs(s.a[0] + k), std::abs(s.a[1] - k));
    }
    case EomKind::SinhGordon2: {
      require_size(s, 2);
      const double x12 = s.x[0] - s.x[1], v12 = s.v[0] - s.v[1], a12 = s.a[0] - s.a[1];
      if (!(4.0 - v12 * v12 > 0.0)) throw Error(ErrorCode::DomainError, "|x12'| >= 2");
      const double R = std::sqrt(4.0 - v12 * v12);
      const double Y = a12 * sgn(x12) / R;
      if (4.0 + Y < 0.0) throw Error(ErrorCode::DomainError, "negative radicand");
      const double eps = s.epsilon;
      return std::abs(Y - 8.0 * eps / (std::cosh(4.0 * std::abs(x12) * std::sqrt(4.0 + Y) / R) - eps));
    }
    case EomKind::CalogeroMoser:
    case EomKind::RuijsenaarsSchneider: {
      const Index n = s.x.size();
      require_size(s, n);
      const double g2 = s.gamma * s.gamma;
      double worst = 0.0;
      for (Index j = 0; j < n; ++j) {
        double rhs = 0.0;
        for (Index k = 0; k < n; ++k) {
          if (k == j) continue;
          if (kind == EomKind::CalogeroMoser) {
            const double d = s.x[k] - s.x[j];
            rhs += 2.0 * g2 / (d * d * d);
          } else {
            const double d = s.x[j] - s.x[k];
            rhs += 2.0 * g2 * s.v[j] * s.v[k] / (d * (g2 - d * d));
          }
        }
        worst = std::max(worst, std::abs(s.a[j] - rhs));
      }
      return worst;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double sinh_gordon2_printed_residual(const EomState& s) {
  require_size(s, 2);
  const double x12 = s.x[0] - s.x[1], v12 = s.v[0] - s.v[1], a12 = s.a[0] - s.a[1];
  if (!(4.0 - v12 * v12 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double R = std::sqrt(4.0 - v12 * v12);
  const double Y = a12 * sgn(x12) / R;
  if (1.0 + Y < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double eps = s.epsilon;
  return std::abs(Y - 4.0 * eps / (std::cosh(4.0 * x12 * std::sqrt(1.0 + Y) / R) - eps));
}

Stencil five_point(const std::array<double, 5>& s, double h) {
  return {s[2], (s[0] - 8.0 * s[1] + 8.0 * s[3] - s[4]) / (12.0 * h),
          (-s[0] + 16.0 * s[1] - 30.0 * s[2] + 16.0 * s[3] - s[4]) / (12.0 * h * h)};
}

std::vector<Stencil> local_derivatives(const Sampler& sample, double t, double h) {
  std::array<RootSnapshot, 5> snaps;
  for (int k = -2; k <= 2; ++k) snaps[static_cast<size_t>(k + 2)] = sample(t + k * h);
  const RootSnapshot& centre = snaps[2];
  std::vector<std::optional<int>> keys;
  for (const auto& e : centre.entries) {
    if (std::find(keys.begin(), keys.end(), e.factor) == keys.end()) keys.push_back(e.factor);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Stencil> out;
  for (const auto& key : keys) {
    std::array<std::vector<double>, 5> xs;
    for (size_t k = 0; k < 5; ++k) xs[k] = snaps[k].positions(key);
    for (size_t k = 0; k < 5; ++k) {
      if (xs[k].size() != xs[2].size()) {
        throw Error(ErrorCode::EventInWindow, "root count changes near t = " + std::to_string(t));
      }
    }
    for (size_t r = 0; r < xs[2].size(); ++r) {
      out.push_back(five_point({xs[0][r], xs[1][r], xs[2][r], xs[3][r], xs[4][r]}, h));
    }
  }
  size_t total = 0;
  for (const auto& s : snaps) total = std::max(total, s.entries.size());
  if (total != centre.entries.size()) throw Error(ErrorCode::EventInWindow, "root count changes near t = " + std::to_string(t));
  return out;
}

RMatrix build_L(LaxKind kind, const RVector& x, const RVector& v, double gamma) {
  const Index n = x.size();
  if (v.size() != n) throw Error(ErrorCode::DomainError, "x and v differ in length");
  RMatrix L = v.asDiagonal();
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const double d = x[k] - x[j];
      if (d == 0.0) throw Error(ErrorCode::CoincidentPositions, "x_j = x_k");
      if (kind == LaxKind::CM) {
        L(j, k) = gamma / d;
      } else {
        if (d + gamma == 0.0) throw Error(ErrorCode::RSPoleAtGamma, "x_k - x_j = -gamma");
        L(j, k) = gamma * v[k] / (d + gamma);
      }
    }
  }
  return L;
}

std::vector<double> projection_roots(const RVector& X0, const RMatrix& L0, double t, int n_scan) {
  const RMatrix M = RMatrix(X0.asDiagonal()) + t * L0;
  const double r = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  RootFindOptions opts;
  opts.window = {-r, r};
  opts.n_scan = n_scan;
  const auto g = [&](double x) { return shifted_determinant(M, x); };
  const auto dg = [&](double x) { return shifted_determinant_dx(M, x); };
  std::vector<double> out;
  for (const auto& root : find_roots(g, dg, opts)) out.push_back(root.x);
  return out;
}

std::array<double, 2> conjugate_momenta_p8(const RVector& x, const RVector& v, double C) {
  if (x.size() != 2 || v.size() != 2) throw Error(ErrorCode::DomainError, "N = 2 expected");
  const double x12 = x[0] - x[1], v12 = v[0] - v[1];
  if (x12 == 0.0 || x12 * x12 == C) throw Error(ErrorCode::SingularConfiguration, "x12 = 0 or x12^2 = C");
  const double k = C * v12 / (2.0 * (x12 * x12 - C));
  return {v[0] + k, v[1] - k};
}

double induced_hamiltonian_p9(const RVector& x, const std::array<double, 2>& P, double C) {
  if (x.size() != 2) throw Error(ErrorCode::DomainError, "N = 2 expected");
  const double x12 = x[0] - x[1];
  if (x12 == 0.0 || x12 * x12 == C) throw Error(ErrorCode::SingularConfiguration, "x12 = 0 or x12^2 = C");
  const double dp = P[0] - P[1];
  return 0.5 * (P[0] * P[0] + P[1] * P[1]) - C * dp * dp / (4.0 * x12 * x12);
}

DecayReport asymptotic_check(const ModelSpec& model, const PhasePoint& point0, Dispersion d,
                             const std::vector<double>& times) {
  for (Index i = 0; i < point0.size(); ++i) {
    if (point0.q[i].imag() != 0.0 || point0.p[i].imag() != 0.0) {
      throw Error(ErrorCode::InvalidPoint, "asymptotics need a real phase point");
    }
  }
  DecayReport report;
  report.times = times;
  for (double t : times) {
    const PhasePoint pt = evolve(point0, d, t);
    RootFindOptions opts;
    opts.window = default_window(model, pt);
    opts.n_scan = 8192;
    const auto roots = find_real_roots(model, pt, opts).positions();
    if (static_cast<Index>(roots.size()) != pt.size()) {
      throw Error(ErrorCode::EventInWindow, "fewer than N roots at t = " + std::to_string(t));
    }
    std::vector<double> free(static_cast<size_t>(pt.size()));
    for (Index i = 0; i < pt.size(); ++i) free[static_cast<size_t>(i)] = pt.q[i].real();
    std::sort(free.begin(), free.end());
    double dev = 0.0;
    for (size_t i = 0; i < roots.size(); ++i) dev = std::max(dev, std::abs(roots[i] - free[i]));
    report.deviations.push_back(dev);
  }
  for (size_t k = 0; k + 1 < report.deviations.size(); ++k) {
    report.ratios.push_back(report.deviations[k] / report.deviations[k + 1]);
  }
  return report;
}

double boost_covariance_check(const ModelSpec& model, const PhasePoint& point, double lambda,
                              const std::vector<double>& etas) {
  if (!is_relativistic(model)) throw Error(ErrorCode::DomainError, "boosts act on relativistic models only");
  const PhasePoint boosted = lorentz_boost(point, lambda);
  const auto roots = [&](const PhasePoint& pt) {
    RootFindOptions opts;
    opts.window = default_window(model, pt);
    opts.n_scan = 8192;
    return find_real_roots(model, pt, opts).positions();
  };
  double worst = 0.0;
  for (double eta : etas) {
    const auto a = roots(evolve(point, Dispersion::Inverse, eta));
    const auto b = roots(evolve(boosted, Dispersion::Inverse, eta / lambda));
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(b[i] - lambda * a[i]));
  }
  return worst;
}

std::pair<double, double> cone_to_lab(double xi, double eta) { return {0.5 * (xi + eta), 0.5 * (xi - eta)}; }

std::pair<double, double> lab_to_cone(double x, double t) { return {x + t, x - t}; }

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Repulsion: return "repulsion";
    case Regime::FiniteLife: return "finite_life";
    case Regime::Cheshirization: return "cheshirization";
    case Regime::Oscillation: return "oscillation";
    case Regime::VirtualCascade: return "virtual_cascade";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view name) {
  for (Regime r : {Regime::Repulsion, Regime::FiniteLife, Regime::Cheshirization, Regime::Oscillation,
                   Regime::VirtualCascade}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorCode::ConfigError, "unknown regime '" + std::string(name) + "'");
}

Regime regime_classify(const ModelSpec& model, const CauchyData& data) {
  const Pair d = pair_of(data);
  const auto boundary = [](const char* what) { return Error(ErrorCode::BoundaryCase, what); };
  if (const auto* m = std::get_if<PolynomialProduct>(&model)) {
    const double C = m->C, s = d.x0 * d.x0;
    if (C == 0.0 || s == C) throw boundary("C = 0 or x12^2 = C");
    if (C < 0.0) return Regime::Cheshirization;
    return s > C ? Regime::Repulsion : Regime::FiniteLife;
  }
  if (const auto* m = std::get_if<SinhPair>(&model)) {
    const double C = m->C, c = std::cosh(d.x0) - 2.0 * C;
    if (C == 0.0 || C == 1.0 || c == 1.0 || c == -1.0) throw boundary("C in {0, 1} or cosh x12 - 2C = +-1");
    if (C < 0.0) return Regime::Cheshirization;
    if (c > 1.0) return Regime::Repulsion;
    if (c < -1.0) throw Error(ErrorCode::DomainError, "cosh x12 - 2C < -1");
    return C > 1.0 ? Regime::Oscillation : Regime::VirtualCascade;
  }
  if (const auto* m = std::get_if<RelativisticPair>(&model)) {
    const double C = m->C, lhs = d.x0 * d.x0 + C * d.vsum;
    if (C == 0.0 || lhs == 0.0) throw boundary("C = 0 or q12^2 = 0");
    if (C < 0.0) return Regime::Cheshirization;
    return lhs > 0.0 ? Regime::Repulsion : Regime::FiniteLife;
  }
  throw Error(ErrorCode::DomainError, "regimes are defined for the N = 2 polynomial, sinh and relativistic models");
}

std::string_view to_string(EventPattern p) noexcept {
  switch (p) {
    case EventPattern::None: return "none";
    case EventPattern::CreateThenAnnihilate: return "create_then_annihilate";
    case EventPattern::AnnihilateThenCreate: return "annihilate_then_create";
    case EventPattern::Recurring: return "recurring";
    case EventPattern::Other: return "other";
  }
  return "unknown";
}

EventPattern expected_pattern(Regime r) noexcept {
  switch (r) {
    case Regime::Repulsion:
    case Regime::Oscillation: return EventPattern::None;
    case Regime::FiniteLife: return EventPattern::CreateThenAnnihilate;
    case Regime::Cheshirization: return EventPattern::AnnihilateThenCreate;
    case Regime::VirtualCascade: return EventPattern::Recurring;
  }
  return EventPattern::Other;
}

EventPattern observed_pattern(const std::vector<Event>& events) {
  std::vector<EventKind> kinds;
  for (const auto& e : events) {
    if (e.kind != EventKind::Crossing) kinds.push_back(e.kind);
  }
  if (kinds.empty()) return EventPattern::None;
  for (size_t k = 1; k < kinds.size(); ++k) {
    if (kinds[k] == kinds[k - 1]) return EventPattern::Other;
  }
  if (kinds.size() >= 4) return EventPattern::Recurring;
  if (kinds.size() == 2) {
    return kinds[0] == EventKind::Creation ? EventPattern::CreateThenAnnihilate : EventPattern::AnnihilateThenCreate;
  }
  return EventPattern::Other;
}

}  // namespace induced
