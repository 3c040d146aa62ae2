#include "epicast/errors.hpp"

namespace epicast {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingDate: return "MissingDate";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::ConstantFeature: return "ConstantFeature";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ContextLengthMismatch: return "ContextLengthMismatch";
    case ErrorCode::NonFinitePrediction: return "NonFinitePrediction";
    case ErrorCode::ZeroRmse: return "ZeroRmse";
    case ErrorCode::EmptyMemberList: return "EmptyMemberList";
    case ErrorCode::DateMisalignment: return "DateMisalignment";
    case ErrorCode::MemberMismatch: return "MemberMismatch";
    case ErrorCode::ZeroOriginal: return "ZeroOriginal";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PartialFailure: return "PartialFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace epicast
