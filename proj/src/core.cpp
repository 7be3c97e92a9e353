#include "induced/core.hpp"

namespace induced {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BrokenPairing: return "BrokenPairing";
    case ErrorCode::NonRealFixedPoint: return "NonRealFixedPoint";
    case ErrorCode::NonPositiveMomentum: return "NonPositiveMomentum";
    case ErrorCode::DegenerateMomenta: return "DegenerateMomenta";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::NotFactorizable: return "NotFactorizable";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::CountChangeNot2: return "CountChangeNot2";
    case ErrorCode::ZeroSeparation: return "ZeroSeparation";
    case ErrorCode::ZeroQ12: return "ZeroQ12";
    case ErrorCode::BranchPoint: return "BranchPoint";
    case ErrorCode::VanishingDenominator: return "VanishingDenominator";
    case ErrorCode::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::CoincidentPositions: return "CoincidentPositions";
    case ErrorCode::RSPoleAtGamma: return "RSPoleAtGamma";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::EventInWindow: return "EventInWindow";
    case ErrorCode::BoundaryCase: return "BoundaryCase";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace induced
