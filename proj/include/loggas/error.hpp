#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loggas {

enum class ErrorCode {
  InvalidArgument,
  MultiplePoint,
  DuplicatePoint,
  IndexOutOfRange,
  NoPointRight,
  CarrierMismatch,
  UnsortedInput,
  OutOfWindow,
  Singularity,
  QuadratureFailure,
  NonNeutral,
  EigensolverFailure,
  EdgeWindow,
  PreconditionViolated,
  DegenerateInterval,
  WrongCount,
  SizeMismatch,
  InsufficientPoints,
  TilesAdjacent,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library surfaces as this exception; the
// code identifies which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MultiplePoint: return "MultiplePoint";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoPointRight: return "NoPointRight";
    case ErrorCode::CarrierMismatch: return "CarrierMismatch";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::Singularity: return "Singularity";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonNeutral: return "NonNeutral";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::EdgeWindow: return "EdgeWindow";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::TilesAdjacent: return "TilesAdjacent";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace loggas
