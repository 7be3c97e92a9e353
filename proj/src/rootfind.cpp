#include "induced/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace induced {

namespace {

struct ScanCell {
  Bracket bracket;
  double slope_scale = 0.0;  // secant-type scale |g| / h around the bracket
};

void check_options(const RootFindOptions& opts) {
  if (!(opts.window.lo < opts.window.hi)) throw Error(ErrorCode::ConfigError, "window needs lo < hi");
  if (opts.n_scan < 16) throw Error(ErrorCode::ConfigError, "n_scan must be at least 16");
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::vector<ScanCell> scan_cells(const RealFunction& g, const RootFindOptions& opts) {
  check_options(opts);
  const int n = opts.n_scan;
  const double h = opts.window.width() / n;
  std::vector<double> xs(static_cast<size_t>(n) + 1), gs(xs.size());
  for (int k = 0; k <= n; ++k) {
    xs[static_cast<size_t>(k)] = k == n ? opts.window.hi : opts.window.lo + k * h;
    const double v = g(xs[static_cast<size_t>(k)]);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, "g is not finite at x = " + std::to_string(xs[static_cast<size_t>(k)]));
    }
    gs[static_cast<size_t>(k)] = v;
  }

  std::vector<ScanCell> cells;
  int last = -1;  // index of the last sample with nonzero sign
  for (int k = 0; k <= n; ++k) {
    const auto uk = static_cast<size_t>(k);
    const int s = sign_of(gs[uk]);
    if (s == 0) {
      double scale = 0.0;
      if (k > 0) scale = std::max(scale, std::abs(gs[uk - 1]));
      if (k < n) scale = std::max(scale, std::abs(gs[uk + 1]));
      cells.push_back({{xs[uk], xs[uk]}, scale / h});
      last = -1;
      continue;
    }
    if (last >= 0 && sign_of(gs[static_cast<size_t>(last)]) != s) {
      const auto ul = static_cast<size_t>(last);
      cells.push_back({{xs[ul], xs[uk]}, std::max(std::abs(gs[ul]), std::abs(gs[uk])) / (xs[uk] - xs[ul])});
    }
    last = k;

    // Hidden pair: same sign on both sides of a local minimum of |g|.
    if (k == 0 || k == n) continue;
    const double gl = gs[uk - 1], gc = gs[uk], gr = gs[uk + 1];
    if (sign_of(gl) != s || sign_of(gr) != s) continue;
    if (!(std::abs(gc) <= std::abs(gl) && std::abs(gc) <= std::abs(gr))) continue;
    if (std::abs(gc) == std::abs(gl) || (std::abs(gc) == std::abs(gr) && !(std::abs(gc) < std::abs(gl)))) continue;
    const auto signed_g = [&](double x) { return s * g(x); };
    std::uintmax_t iters = 200;
    const auto [xmin, gmin] = boost::math::tools::brent_find_minima(
        signed_g, xs[uk - 1], xs[uk + 1], std::numeric_limits<double>::digits / 2, iters);
    if (gmin < 0.0) {
      const double scale = std::max({std::abs(gl), std::abs(gc), std::abs(gr)}) / (2.0 * h);
      cells.push_back({{xs[uk - 1], xmin}, scale});
      cells.push_back({{xmin, xs[uk + 1]}, scale});
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const ScanCell& a, const ScanCell& b) { return a.bracket.lo < b.bracket.lo; });
  return cells;
}

}  // namespace

size_t RootSet::count(int factor) const {
  return static_cast<size_t>(std::count_if(roots.begin(), roots.end(),
                                           [&](const Root& r) { return r.factor.value_or(0) == factor; }));
}

std::vector<double> RootSet::positions() const {
  std::vector<double> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.x);
  return out;
}

std::vector<double> RootSet::positions(int factor) const {
  std::vector<double> out;
  for (const auto& r : roots) {
    if (r.factor.value_or(0) == factor) out.push_back(r.x);
  }
  return out;
}

std::vector<Bracket> scan_brackets(const RealFunction& g, const RootFindOptions& opts) {
  std::vector<Bracket> out;
  for (const auto& cell : scan_cells(g, opts)) out.push_back(cell.bracket);
  return out;
}

double refine(const RealFunction& g, const RealFunction& dg, Bracket bracket, const RootFindOptions& opts) {
  double a = bracket.lo, b = bracket.hi;
  if (a == b) return a;
  double ga = g(a), gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if (sign_of(ga) == sign_of(gb)) throw Error(ErrorCode::NoConvergence, "bracket has no sign change");

  double x = 0.5 * (a + b);
  for (int it = 0; it < opts.max_newton; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (sign_of(gx) == sign_of(ga)) {
      a = x;
      ga = gx;
    } else {
      b = x;
    }
    const double d = dg(x);
    double next = x - gx / d;
    const bool newton_ok = std::isfinite(next) && next > a && next < b;
    // A Newton step below tolerance that lands on the far side of the
    // bracket means x is already as good as it gets.
    if (!newton_ok && std::isfinite(next) && std::abs(next - x) <= opts.tolerance(x)) return x;
    if (!newton_ok) next = 0.5 * (a + b);
    if (std::abs(next - x) <= opts.tolerance(x) || (b - a) <= 2.0 * opts.tolerance(x)) {
      return next;
    }
    x = next;
  }
  throw Error(ErrorCode::NoConvergence,
              "root refinement did not converge in " + std::to_string(opts.max_newton) + " iterations");
}

std::vector<Root> find_roots(const RealFunction& g, const RealFunction& dg, const RootFindOptions& opts,
                             std::optional<int> factor) {
  const double h = opts.window.width() / opts.n_scan;
  std::vector<Root> out;
  for (const auto& cell : scan_cells(g, opts)) {
    const double x = refine(g, dg, cell.bracket, opts);
    if (x < opts.window.lo + h || x > opts.window.hi - h) {
      throw Error(ErrorCode::WindowTooSmall, "root at x = " + std::to_string(x) + " is within one scan cell of the window edge");
    }
    const bool near_double = std::abs(dg(x)) < 1e-7 * cell.slope_scale;
    out.push_back({x, factor, near_double});
  }
  return out;
}

RootSet find_real_roots(const ModelSpec& model, const PhasePoint& point, const RootFindOptions& opts) {
  RootSet set;
  for (int f = 0; f < factor_count(model); ++f) {
    const auto g = [&](double x) { return factor_value(model, point, x, f); };
    const auto dg = [&](double x) { return factor_sample(model, point, x, f).dx; };
    const auto tag = is_factorized(model) ? std::optional<int>(f) : std::nullopt;
    for (const auto& r : find_roots(g, dg, opts, tag)) set.roots.push_back(r);
  }
  std::sort(set.roots.begin(), set.roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
  return set;
}

namespace {

// Soliton factors switch where Re(p_i (q_i - x)) = 0.
double centre(const ModelSpec& model, const PhasePoint& point, Index i) {
  if (family(model) == ModelFamily::SolitonDeterminant) {
    return (point.p[i] * point.q[i]).real() / point.p[i].real();
  }
  return point.q[i].real();
}

double model_scale(const ModelSpec& model, const PhasePoint& point) {
  const Index n = point.size();
  const bool soliton = family(model) == ModelFamily::SolitonDeterminant;
  double scale = 0.0;
  if (const auto* m = std::get_if<PolynomialProduct>(&model)) {
    const double c0 = std::abs(polynomial_constant(*m, n));
    scale = std::sqrt(std::abs(m->C)) + std::pow(c0, 1.0 / static_cast<double>(n));
  } else if (const auto* m = std::get_if<SinhPair>(&model)) {
    scale = std::sqrt(std::abs(m->C));
  } else if (const auto* m = std::get_if<RelativisticPair>(&model)) {
    const Complex k = 0.25 * m->C * (1.0 / (point.p[0] * point.p[0]) + 1.0 / (point.p[1] * point.p[1]));
    scale = 2.0 * std::sqrt(std::abs(k));
  } else if (family(model) == ModelFamily::Characteristic) {
    scale = build_W(model, point.p).norm();
  } else if (soliton) {
    double phase = 0.0, min_re = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      min_re = std::min(min_re, point.p[i].real());
      phase = std::max(phase, std::log(std::abs(point.p[i]) / point.p[i].real()));
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double ratio = std::abs((point.p[i] - point.p[j]) / (point.p[i] + point.p[j]));
        if (ratio > 0.0) phase = std::max(phase, std::abs(std::log(ratio)));
      }
    }
    scale = static_cast<double>(n) * (1.0 + std::min(phase, 50.0)) / min_re;
  }
  return scale;
}

// Centre speed along eta of a cone-frame factor: d(centre)/d(eta).
double cone_drift(const ModelSpec& model, const PhasePoint& point, Index i) {
  const Complex p = point.p[i];
  if (family(model) == ModelFamily::SolitonDeterminant) return -(1.0 / p).real() / p.real();
  return -(1.0 / (p * p)).real();
}

}  // namespace

Window default_window(const ModelSpec& model, const PhasePoint& point) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index i = 0; i < point.size(); ++i) {
    lo = std::min(lo, centre(model, point, i));
    hi = std::max(hi, centre(model, point, i));
  }
  const double delta = 2.0 * ((hi - lo) + model_scale(model, point) + 1.0);
  return {lo - delta, hi + delta};
}

Window default_lab_window(const ModelSpec& model, const PhasePoint& point0, double t) {
  // A free centre xi = c - k eta sits at x = (c - t + k t) / (1 + k) in the lab.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double cone_lo = lo, cone_hi = hi;
  for (Index i = 0; i < point0.size(); ++i) {
    const double c = centre(model, point0, i);
    const double k = -cone_drift(model, point0, i);
    const double x = (c - t + k * t) / (1.0 + k);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    cone_lo = std::min(cone_lo, c);
    cone_hi = std::max(cone_hi, c);
  }
  const double delta = 2.0 * ((hi - lo) + (cone_hi - cone_lo) + model_scale(model, point0) + 1.0);
  return {lo - delta, hi + delta};
}

RootSet find_lab_roots(const ModelSpec& model, const PhasePoint& point0, double t, const RootFindOptions& opts) {
  const Index n = point0.size();
  CVector slope(n);
  for (Index j = 0; j < n; ++j) slope[j] = -1.0 / (point0.p[j] * point0.p[j]) - 1.0;
  const auto at = [&](double x) { return evolve(point0, Dispersion::Inverse, x - t); };
  RootSet set;
  for (int f = 0; f < factor_count(model); ++f) {
    const auto tag = is_factorized(model) ? std::optional<int>(f) : std::nullopt;
    const auto g = [&](double x) { return factor_value(model, at(x), x + t, f); };
    const auto dg = [&](double x) {
      const Jet j = jet(model, at(x), x + t, 1, tag);
      return (j.grad.array() * slope.array()).sum().real();
    };
    for (const auto& r : find_roots(g, dg, opts, tag)) set.roots.push_back(r);
  }
  std::sort(set.roots.begin(), set.roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
  return set;
}

}  // namespace induced
