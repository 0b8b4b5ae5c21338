#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdjoint {

enum class ErrorCode {
  SingularDesign,
  LengthMismatch,
  DegenerateSample,
  InsufficientNeighbors,
  NotPositiveDefinite,
  NotPSD,
  ComponentDegenerate,
  MissingColumn,
  NonNumericCell,
  EmptyAfterFiltering,
  InvalidConfig,
  MissingStatistics,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Input errors are the caller's fault (bad file, bad config); everything else
/// is an estimator failure on otherwise valid input.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdjoint
