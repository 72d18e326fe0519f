#include "plainscore/error.hpp"

namespace plainscore {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kEmptyAbstract: return "EmptyAbstract";
    case ErrorKind::kEmptySummary: return "EmptySummary";
    case ErrorKind::kDegenerateText: return "DegenerateText";
    case ErrorKind::kAllOOV: return "AllOOV";
    case ErrorKind::kSingleClassData: return "SingleClassData";
    case ErrorKind::kVocabMismatch: return "VocabMismatch";
    case ErrorKind::kEmptyPenaltySet: return "EmptyPenaltySet";
    case ErrorKind::kInvalidDistribution: return "InvalidDistribution";
    case ErrorKind::kMissingTargets: return "MissingTargets";
    case ErrorKind::kTieDetected: return "TieDetected";
    case ErrorKind::kEmptyText: return "EmptyText";
    case ErrorKind::kTooShort: return "TooShort";
    case ErrorKind::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kIO: return "IOError";
  }
  return "Unknown";
}

}  // namespace plainscore
