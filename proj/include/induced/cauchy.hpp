#pragma once

#include <optional>
#include <vector>

#include "induced/models.hpp"

namespace induced {

/// Positions and velocities of the N roots at time t_ref.
struct CauchyData {
  RVector x;
  RVector v;
  double t_ref = 0.0;
};

struct CauchyOptions {
  std::vector<int> epsilon;                    ///< signs for determinant models (default +1)
  std::optional<std::vector<Index>> pairing;   ///< restrict the search to one pairing
  std::optional<PhasePoint> guess;             ///< tried before the built-in starts
  double tol = 1e-10;
  int max_iter = 100;
};

/// f(q - x_i e, p) for each i, then sum_j (h'(p_j) - v_i) f_{q_j}(q - x_i e, p).
RVector residual_system(const ModelSpec& model, Dispersion d, const PhasePoint& point, const CauchyData& data);

/// Every distinct phase point (at time t_ref) whose roots and velocities are
/// the data. Points that differ only by a relabelling or by a sign of p that
/// the dynamics cannot see are reported once.
std::vector<PhasePoint> solve_cauchy_all(const ModelSpec& model, Dispersion d, const CauchyData& data,
                                         const CauchyOptions& opts = {});

/// The unique solution; AmbiguousBranch if several exist, NoConvergence if none.
PhasePoint solve_cauchy(const ModelSpec& model, Dispersion d, const CauchyData& data,
                        const CauchyOptions& opts = {});

/// Closed form for (q1 - x)(q2 - x) - C/4.
PhasePoint cauchy_poly2(double C, const CauchyData& data);

/// Closed form for sinh(q1 - x) sinh(q2 - x) - C.
PhasePoint cauchy_sinh2(double C, const CauchyData& data);

/// Velocity of the root at x: sum_j h'(p_j) f_{q_j} / sum_j f_{q_j}.
double implied_velocity(const ModelSpec& model, Dispersion d, const PhasePoint& point, double x);

/// Second time derivative of the root at x moving with velocity v:
/// sum_{j,k} (h'(p_j) - v)(h'(p_k) - v) f_{q_j q_k} / sum_j f_{q_j}.
double acceleration_from_implicit(const ModelSpec& model, Dispersion d, const PhasePoint& point, double x, double v);

}  // namespace induced
