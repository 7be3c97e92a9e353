#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace induced {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorCode {
  BrokenPairing,
  NonRealFixedPoint,
  NonPositiveMomentum,
  DegenerateMomenta,
  ZeroMomentum,
  NonPositiveLambda,
  NumericalOverflow,
  InvalidPoint,
  NotFactorizable,
  NonFiniteValue,
  NoConvergence,
  WindowTooSmall,
  CountChangeNot2,
  ZeroSeparation,
  ZeroQ12,
  BranchPoint,
  VanishingDenominator,
  AmbiguousBranch,
  DegenerateData,
  DomainError,
  CoincidentPositions,
  RSPoleAtGamma,
  SingularConfiguration,
  EventInWindow,
  BoundaryCase,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Relative tolerance for "this complex number is real".
inline constexpr double kRealityTolerance = 1e-12;

inline bool is_real(Complex z, double tol = kRealityTolerance) {
  return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z));
}

}  // namespace induced
