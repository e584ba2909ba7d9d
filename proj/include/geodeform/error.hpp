#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geodeform {

enum class ErrorCode {
  NonFinite,
  CoincidentPoints,
  CollinearPoints,
  Parallel,
  ConcentricCircles,
  NotNormalized,
  AmbiguousOrientation,
  IllConditioned,
  TooFewPoints,
  TooFewLines,
  TooFewCircles,
  DegeneratePosition,
  NonConvexQuadrilateral,
  PointOutsideCircumcircle,
  PointOnVertex,
  UnknownLabel,
  WrongObjectType,
  RejectionBudgetExhausted,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::CollinearPoints: return "CollinearPoints";
    case ErrorCode::Parallel: return "Parallel";
    case ErrorCode::ConcentricCircles: return "ConcentricCircles";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::AmbiguousOrientation: return "AmbiguousOrientation";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewLines: return "TooFewLines";
    case ErrorCode::TooFewCircles: return "TooFewCircles";
    case ErrorCode::DegeneratePosition: return "DegeneratePosition";
    case ErrorCode::NonConvexQuadrilateral: return "NonConvexQuadrilateral";
    case ErrorCode::PointOutsideCircumcircle: return "PointOutsideCircumcircle";
    case ErrorCode::PointOnVertex: return "PointOnVertex";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::WrongObjectType: return "WrongObjectType";
    case ErrorCode::RejectionBudgetExhausted: return "RejectionBudgetExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Raised by every construction whose precondition does not hold.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geodeform
