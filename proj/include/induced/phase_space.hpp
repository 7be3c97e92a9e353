#pragma once

#include <string_view>
#include <vector>

#include "induced/core.hpp"

namespace induced {

/// One-particle Hamiltonian h(p) driving the free flow q' = h'(p), p' = 0.
enum class Dispersion {
  Quadratic,  ///< h = p^2/2
  Cubic,      ///< h = p^3/3
  Inverse,    ///< h = 1/p (relativistic models, evolution in the cone variable eta)
};

Complex energy(Dispersion d, Complex p);
Complex velocity(Dispersion d, Complex p);

std::string_view to_string(Dispersion d) noexcept;
Dispersion dispersion_from_string(std::string_view name);

/// Momentum constraints a model family imposes on top of the reality pairing.
enum class ModelFamily {
  Flat,                 ///< polynomial and sinh products: no extra conditions
  SolitonDeterminant,   ///< KdV / Sinh-Gordon: Re p > 0
  Characteristic,       ///< CM / RS: pairwise distinct p
};

/// A point of the moduli space: N complex coordinates and momenta with an
/// explicit conjugation pairing. `pairing[i] == j` means q_j = conj(q_i) and
/// p_j = conj(p_i); fixed indices carry real values.
struct PhasePoint {
  CVector q;
  CVector p;
  std::vector<int> epsilon;
  std::vector<Index> pairing;

  Index size() const { return q.size(); }

  /// All-real point with identity pairing and epsilon = +1.
  static PhasePoint real(const RVector& q, const RVector& p);
  /// Fills in identity pairing and unit signs when left empty.
  static PhasePoint make(CVector q, CVector p, std::vector<Index> pairing = {},
                         std::vector<int> epsilon = {});
};

void validate(const PhasePoint& point, ModelFamily family, double tol = kRealityTolerance);

/// Free flow over `dt`: q_i += dt * h'(p_i).
PhasePoint evolve(const PhasePoint& point, Dispersion d, double dt);

/// Sum of h(p_i); real because of the pairing.
double hamiltonian(const PhasePoint& point, Dispersion d);

/// q -> lambda q, p -> p / lambda. Acts on cone variables together with
/// xi -> lambda xi, eta -> eta / lambda.
PhasePoint lorentz_boost(const PhasePoint& point, double lambda);

}  // namespace induced
