#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace winding {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  NonNested,
  NonPositiveRadius,
  QuadratureNonConvergence,
  OrderingViolation,
  AmbiguousBranch,
  NoAdmissibleTheta,
  NoAdmissibleEpsilon,
  KappaBarUnreachable,
  LengthMismatch,
  MissingArcData,
  DegenerateEllipticity,
  SingularJacobian,
  MixedDerivativeDominance,
  SolveFailure,
  StepTooLarge,
  InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonNested: return "NonNested";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorCode::NoAdmissibleTheta: return "NoAdmissibleTheta";
    case ErrorCode::NoAdmissibleEpsilon: return "NoAdmissibleEpsilon";
    case ErrorCode::KappaBarUnreachable: return "KappaBarUnreachable";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingArcData: return "MissingArcData";
    case ErrorCode::DegenerateEllipticity: return "DegenerateEllipticity";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::MixedDerivativeDominance: return "MixedDerivativeDominance";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Library error type; carries a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

/// x <= y up to a relative slack on the larger magnitude.
inline bool leq_rel(double x, double y, double rel) {
  return x <= y + rel * std::max(std::abs(x), std::abs(y));
}

/// SplitMix64 step; used to derive independent per-walker RNG streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace winding
