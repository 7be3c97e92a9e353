#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "induced/cauchy.hpp"
#include "induced/tracker.hpp"

namespace induced {

// Two-particle polynomial model, explicit solution.

struct Poly2State {
  double sum = 0.0;     ///< x1 + x2
  double x12_sq = 0.0;  ///< (x1 - x2)^2; negative when no real roots exist
};

/// x1 + x2 = S0 + (v1 + v2) t and x12^2 = (x0 + v12 t)^2 + C v12^2 t^2 / (x0^2 - C).
Poly2State poly2_closed_form(double C, const CauchyData& data, double t);

/// Same, with the printed coefficient (C v12 t)^2 in the last term.
Poly2State poly2_closed_form_printed(double C, const CauchyData& data, double t);

/// Zeros in t of x12^2(t), ascending (0 or 2 values; one double zero is reported twice).
std::vector<double> poly2_event_times(double C, const CauchyData& data);

/// Sorted roots (empty when x12^2 < 0).
std::vector<double> poly2_roots(double C, const CauchyData& data, double t);

// Equations of motion.

enum class EomKind {
  Polynomial2,  ///< x1'' + x2'' = 0, x12'' = C x12'^2 / (x12 (x12^2 - C))
  Sinh2,        ///< xj'' = (-1)^(j+1) C x12'^2 (c^2 - 2Cc + 1) / (sinh x12 ((c - 2C)^2 - 1)), c = cosh x12
  Relativistic2,  ///< xi_i'' = (-1)^i C xi12'^2 (xi1' + xi2') / (2 xi12 (xi12^2 + C (xi1' + xi2')))
  SinhGordon2,  ///< Y = 8 eps / (cosh(4 |x12| sqrt(4 + Y) / R) - eps), Y = x12'' sgn x12 / R, R = sqrt(4 - x12'^2)
  CalogeroMoser,   ///< xj'' = sum_k 2 gamma^2 / (x_k - x_j)^3
  RuijsenaarsSchneider,  ///< xj'' = sum_k 2 gamma^2 xj' xk' / ((x_j - x_k)(gamma^2 - (x_j - x_k)^2))
};

std::string_view to_string(EomKind kind) noexcept;

struct EomState {
  RVector x, v, a;
  double C = 0.0;
  double gamma = 1.0;
  int epsilon = 1;
};

/// max |lhs - rhs| over the equations of the system.
double residual_eom(EomKind kind, const EomState& state);

/// Residual of the two-soliton relation as printed:
/// Y = 4 eps / (cosh(4 x12 sqrt(1 + Y) / R) - eps).
double sinh_gordon2_printed_residual(const EomState& state);

/// Value, first and second derivative from five equally spaced samples.
struct Stencil {
  double x = 0.0, v = 0.0, a = 0.0;
};
Stencil five_point(const std::array<double, 5>& samples, double h);

/// Per-root x, v, a at t from roots sampled at t + k h, k = -2..2. Roots are
/// followed by factor and rank; EventInWindow if a count changes.
std::vector<Stencil> local_derivatives(const Sampler& sample, double t, double h);

// Calogero-Moser and Ruijsenaars-Schneider.

enum class LaxKind { CM, RS };

/// diag(v) + V with V_jk = gamma / (x_k - x_j) (CM) or gamma v_k / (x_k - x_j + gamma) (RS).
RMatrix build_L(LaxKind kind, const RVector& x, const RVector& v, double gamma);

/// Real zeros of det(diag(X0) + t L0 - x I).
std::vector<double> projection_roots(const RVector& X0, const RMatrix& L0, double t, int n_scan = 4096);

// Two-particle Lagrangian structure.

std::array<double, 2> conjugate_momenta_p8(const RVector& x, const RVector& v, double C);
double induced_hamiltonian_p9(const RVector& x, const std::array<double, 2>& P, double C);

// Asymptotics.

struct DecayReport {
  std::vector<double> times;
  std::vector<double> deviations;  ///< max_i |x_i(t) - a_i - p_i t|
  std::vector<double> ratios;      ///< deviations[k] / deviations[k + 1]
};

/// a = q(0) and p of a real point; EventInWindow if fewer than N roots exist at a probe time.
DecayReport asymptotic_check(const ModelSpec& model, const PhasePoint& point0, Dispersion d,
                             const std::vector<double>& times = {-100.0, -200.0, -400.0});

// Relativistic models.

/// max |xi(boosted point, eta / lambda) - lambda xi(point, eta)| over the given eta.
double boost_covariance_check(const ModelSpec& model, const PhasePoint& point, double lambda,
                              const std::vector<double>& etas);

std::pair<double, double> cone_to_lab(double xi, double eta);
std::pair<double, double> lab_to_cone(double x, double t);

// Regimes of N = 2 models.

enum class Regime { Repulsion, FiniteLife, Cheshirization, Oscillation, VirtualCascade };
std::string_view to_string(Regime r) noexcept;
Regime regime_from_string(std::string_view name);

/// Classification from Cauchy data (cone variables for the relativistic pair).
Regime regime_classify(const ModelSpec& model, const CauchyData& data);

/// Creation/annihilation structure over a long time window.
enum class EventPattern { None, CreateThenAnnihilate, AnnihilateThenCreate, Recurring, Other };
std::string_view to_string(EventPattern p) noexcept;

EventPattern expected_pattern(Regime r) noexcept;
/// Crossing events are ignored. Recurring means at least four alternating events.
EventPattern observed_pattern(const std::vector<Event>& events);

}  // namespace induced
