#include "rnip/error.hpp"

namespace rnip {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MetaInvalid: return "MetaInvalid";
    case ErrorCode::NotRggb: return "NotRggb";
    case ErrorCode::OddDims: return "OddDims";
    case ErrorCode::BadChannels: return "BadChannels";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DivisibilityError: return "DivisibilityError";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::MissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rnip
