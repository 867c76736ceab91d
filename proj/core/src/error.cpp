#include "rys/error.hpp"

namespace rys {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::MetricSingular: return "MetricSingular";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::NotASoliton: return "NotASoliton";
    case ErrorCode::AlphaZero: return "AlphaZero";
    case ErrorCode::DegenerateBeta: return "DegenerateBeta";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NotCompact: return "NotCompact";
    case ErrorCode::NotSteady: return "NotSteady";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnknownCase: return "UnknownCase";
  }
  return "Unknown";
}

}  // namespace rys
