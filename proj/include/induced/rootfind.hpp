#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "induced/models.hpp"

namespace induced {

struct Window {
  double lo = -10.0;
  double hi = 10.0;

  double width() const { return hi - lo; }
};

struct RootFindOptions {
  Window window;
  int n_scan = 2048;
  double x_tol_abs = 1e-12;
  double x_tol_rel = 1e-12;
  int max_newton = 50;

  double tolerance(double x) const { return x_tol_abs + x_tol_rel * std::abs(x); }
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct Root {
  double x = 0.0;
  std::optional<int> factor;
  /// |g'(x)| is below 1e-7 of the local secant scale: a creation or
  /// annihilation is imminent.
  bool near_double = false;
};

/// Real roots in ascending order (merged across factors).
struct RootSet {
  std::vector<Root> roots;

  size_t count() const { return roots.size(); }
  size_t count(int factor) const;
  std::vector<double> positions() const;
  std::vector<double> positions(int factor) const;
};

using RealFunction = std::function<double(double)>;

/// Sign-change brackets on the uniform grid. A cell pair around a local
/// minimum of |g| is also searched (Brent) for a hidden sign change, which
/// splits close root pairs that fall inside a single scan cell.
std::vector<Bracket> scan_brackets(const RealFunction& g, const RootFindOptions& opts);

/// Safeguarded Newton: the iterate never leaves the bracket and bisection
/// takes over when a Newton step would.
double refine(const RealFunction& g, const RealFunction& dg, Bracket bracket, const RootFindOptions& opts);

/// scan_brackets + refine with near-double flags and the window-edge check.
std::vector<Root> find_roots(const RealFunction& g, const RealFunction& dg, const RootFindOptions& opts,
                             std::optional<int> factor = std::nullopt);

/// Real zeros of x -> f(q - x e, p). Factorized models are solved per factor
/// and merged, each root tagged with its factor.
RootSet find_real_roots(const ModelSpec& model, const PhasePoint& point, const RootFindOptions& opts);

/// Window around the (effective) centres of the q_i, widened by a model scale.
Window default_window(const ModelSpec& model, const PhasePoint& point);

/// Relativistic models read in laboratory coordinates: at lab time t the
/// roots are the x with f(q(eta = x - t) - (x + t) e, p) = 0, where q(eta)
/// is `point0` evolved along the cone variable.
RootSet find_lab_roots(const ModelSpec& model, const PhasePoint& point0, double t, const RootFindOptions& opts);

Window default_lab_window(const ModelSpec& model, const PhasePoint& point0, double t);

}  // namespace induced
