#include "rdjoint/error.hpp"

namespace rdjoint {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ComponentDegenerate: return "ComponentDegenerate";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MissingStatistics: return "MissingStatistics";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch:
    case ErrorCode::MissingColumn:
    case ErrorCode::NonNumericCell:
    case ErrorCode::EmptyAfterFiltering:
    case ErrorCode::InvalidConfig:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

}  // namespace rdjoint
