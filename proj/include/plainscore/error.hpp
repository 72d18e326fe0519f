#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plainscore {

enum class ErrorKind {
  kInvalidArgument,
  kEmptyAbstract,
  kEmptySummary,
  kDegenerateText,
  kAllOOV,
  kSingleClassData,
  kVocabMismatch,
  kEmptyPenaltySet,
  kInvalidDistribution,
  kMissingTargets,
  kTieDetected,
  kEmptyText,
  kTooShort,
  kScorerUnavailable,
  kParse,
  kIO,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace plainscore
