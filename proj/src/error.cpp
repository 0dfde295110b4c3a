#include "fragsim/error.hpp"

namespace fragsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::MassBudgetExceeded: return "MassBudgetExceeded";
    case ErrorCode::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::InvalidFragmentVector: return "InvalidFragmentVector";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::RefinementMismatch: return "RefinementMismatch";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::DivergentMeasure: return "DivergentMeasure";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::EmptyTruncation: return "EmptyTruncation";
    case ErrorCode::DeadState: return "DeadState";
    case ErrorCode::DegenerateNormalizer: return "DegenerateNormalizer";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fragsim
