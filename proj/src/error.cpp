#include "castor/error.hpp"

namespace castor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidShapeletLength: return "InvalidShapeletLength";
    case ErrorCode::InvalidFoldCount: return "InvalidFoldCount";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedDataset: return "RaggedDataset";
    case ErrorCode::InvalidDataset: return "InvalidDataset";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::SeriesLengthMismatch: return "SeriesLengthMismatch";
    case ErrorCode::ShapeletLongerThanSeries: return "ShapeletLongerThanSeries";
    case ErrorCode::SubsequenceOutOfBounds: return "SubsequenceOutOfBounds";
    case ErrorCode::ShapeletTooLong: return "ShapeletTooLong";
    case ErrorCode::FeatureDimensionMismatch: return "FeatureDimensionMismatch";
    case ErrorCode::InvalidModelFile: return "InvalidModelFile";
    case ErrorCode::InternalPaddingError: return "InternalPaddingError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidFeatures: return "InvalidFeatures";
  }
  return "Unknown";
}

}  // namespace castor
