#include "lrcc/errors.hpp"

namespace lrcc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::SylvesterSingular: return "SylvesterSingular";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::CholeskyFailed: return "CholeskyFailed";
    case ErrorCode::LineSearchFailed: return "LineSearchFailed";
    case ErrorCode::DegenerateTruth: return "DegenerateTruth";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DataError: return "DataError";
    case ErrorCode::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

}  // namespace lrcc
