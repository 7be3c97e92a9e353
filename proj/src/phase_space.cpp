#include "induced/phase_space.hpp"

#include <cmath>
#include <string>

namespace induced {

namespace {

void require_nonzero_momenta(const PhasePoint& point) {
  for (Index i = 0; i < point.size(); ++i) {
    if (point.p[i] == Complex(0.0)) {
      throw Error(ErrorCode::ZeroMomentum, "p_" + std::to_string(i) + " = 0 with inverse dispersion");
    }
  }
}

bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Complex energy(Dispersion d, Complex p) {
  switch (d) {
    case Dispersion::Quadratic: return 0.5 * p * p;
    case Dispersion::Cubic: return p * p * p / 3.0;
    case Dispersion::Inverse: return 1.0 / p;
  }
  return {};
}

Complex velocity(Dispersion d, Complex p) {
  switch (d) {
    case Dispersion::Quadratic: return p;
    case Dispersion::Cubic: return p * p;
    case Dispersion::Inverse: return -1.0 / (p * p);
  }
  return {};
}

std::string_view to_string(Dispersion d) noexcept {
  switch (d) {
    case Dispersion::Quadratic: return "quadratic";
    case Dispersion::Cubic: return "cubic";
    case Dispersion::Inverse: return "inverse";
  }
  return "unknown";
}

Dispersion dispersion_from_string(std::string_view name) {
  if (name == "quadratic") return Dispersion::Quadratic;
  if (name == "cubic") return Dispersion::Cubic;
  if (name == "inverse") return Dispersion::Inverse;
  throw Error(ErrorCode::ConfigError, "unknown dispersion '" + std::string(name) + "'");
}

PhasePoint PhasePoint::real(const RVector& q, const RVector& p) {
  return make(q.cast<Complex>(), p.cast<Complex>());
}

PhasePoint PhasePoint::make(CVector q, CVector p, std::vector<Index> pairing, std::vector<int> epsilon) {
  PhasePoint point;
  const Index n = q.size();
  point.q = std::move(q);
  point.p = std::move(p);
  if (pairing.empty()) {
    pairing.resize(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) pairing[static_cast<size_t>(i)] = i;
  }
  if (epsilon.empty()) epsilon.assign(static_cast<size_t>(n), 1);
  point.pairing = std::move(pairing);
  point.epsilon = std::move(epsilon);
  return point;
}

void validate(const PhasePoint& point, ModelFamily family, double tol) {
  const Index n = point.size();
  if (n < 1) throw Error(ErrorCode::InvalidPoint, "N must be at least 1");
  if (point.p.size() != n || static_cast<Index>(point.pairing.size()) != n ||
      static_cast<Index>(point.epsilon.size()) != n) {
    throw Error(ErrorCode::InvalidPoint, "q, p, pairing and epsilon must have equal length");
  }
  for (Index i = 0; i < n; ++i) {
    const auto s = point.pairing[static_cast<size_t>(i)];
    const auto label = [i] { return std::to_string(i); };
    if (s < 0 || s >= n || point.pairing[static_cast<size_t>(s)] != i) {
      throw Error(ErrorCode::BrokenPairing, "pairing is not an involution at index " + label());
    }
    const int e = point.epsilon[static_cast<size_t>(i)];
    if (e != 1 && e != -1) throw Error(ErrorCode::InvalidPoint, "epsilon_" + label() + " must be +1 or -1");
    if (e != point.epsilon[static_cast<size_t>(s)]) {
      throw Error(ErrorCode::BrokenPairing, "epsilon differs across pair at index " + label());
    }
    if (!close(point.q[s], std::conj(point.q[i]), tol)) {
      throw Error(ErrorCode::BrokenPairing, "q_" + label() + " is not conjugate to its partner");
    }
    if (s == i && !is_real(point.p[i], tol)) {
      throw Error(ErrorCode::NonRealFixedPoint, "p_" + label() + " must be real at a fixed index");
    }
    if (!close(point.p[s], std::conj(point.p[i]), tol)) {
      throw Error(ErrorCode::BrokenPairing, "p_" + label() + " is not conjugate to its partner");
    }
    if (family == ModelFamily::SolitonDeterminant && !(point.p[i].real() > 0.0)) {
      throw Error(ErrorCode::NonPositiveMomentum, "Re p_" + label() + " must be positive");
    }
  }
  if (family == ModelFamily::Characteristic) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (point.p[i] == point.p[j]) {
          throw Error(ErrorCode::DegenerateMomenta,
                      "p_" + std::to_string(i) + " == p_" + std::to_string(j));
        }
      }
    }
  }
}

PhasePoint evolve(const PhasePoint& point, Dispersion d, double dt) {
  if (d == Dispersion::Inverse) require_nonzero_momenta(point);
  PhasePoint out = point;
  for (Index i = 0; i < point.size(); ++i) out.q[i] += dt * velocity(d, point.p[i]);
  return out;
}

double hamiltonian(const PhasePoint& point, Dispersion d) {
  if (d == Dispersion::Inverse) require_nonzero_momenta(point);
  Complex sum = 0.0;
  for (Index i = 0; i < point.size(); ++i) sum += energy(d, point.p[i]);
  return sum.real();
}

PhasePoint lorentz_boost(const PhasePoint& point, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonPositiveLambda, "boost parameter must be positive");
  PhasePoint out = point;
  out.q *= lambda;
  out.p /= lambda;
  return out;
}

}  // namespace induced
