#pragma once

#include <optional>
#include <random>

#include <doctest.h>

#include "induced/models.hpp"

namespace support {

using namespace induced;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline CVector cvec(std::initializer_list<Complex> values) {
  CVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const auto& z : values) v[i++] = z;
  return v;
}

inline RVector rvec(std::initializer_list<double> values) {
  RVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double z : values) v[i++] = z;
  return v;
}

/// (q, p) for a conjugate pair at indices 0, 1.
inline PhasePoint conjugate_pair(Complex q, Complex p, std::vector<int> eps = {}) {
  return PhasePoint::make(cvec({q, std::conj(q)}), cvec({p, std::conj(p)}), {1, 0}, std::move(eps));
}

/// Code of the induced::Error thrown by f, or nullopt when f returns.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
double derivative(F&& f, double x, double h = 1e-5) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace support
