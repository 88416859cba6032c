#ifndef FAIRTAIL_ERROR_HPP_
#define FAIRTAIL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairtail {

enum class ErrorCode {
  // dataset
  MalformedLine,
  NonPositiveCount,
  EmptyDataset,
  UnmappedItem,
  ConflictingMapping,
  // recommenders
  InsufficientData,
  IndexOutOfRange,
  ScoreUndefined,
  ZeroVector,
  // popularity / fairness
  DegeneratePartition,
  EmptyGroup,
  ZeroBaseGap,
  // orchestration
  InvalidArgument,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// All library failures surface as this exception; `code()` tells callers
/// which contract was violated without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  /// Message without the code-name prefix, for callers adding context.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fairtail

#endif  // FAIRTAIL_ERROR_HPP_
