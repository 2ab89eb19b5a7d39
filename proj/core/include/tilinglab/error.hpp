#pragma once

#include <stdexcept>
#include <string>

namespace tilinglab {

enum class ErrorCode {
  IntraPartEdge,
  IndexOutOfRange,
  ShapeMismatch,
  ParseError,
  TargetInSet,
  AlphaOutOfRange,
  EtaTooSmall,
  GenerationFailed,
  SizesExceedPart,
  PartsNotDisjoint,
  SubsetSpaceTooLarge,
  TooManyLowDegreeVertices,
  SizeMismatch,
  EnumerationTruncated,
  TupleSpaceTooLarge,
  XiOutOfRange,
  TOutOfRange,
  DegenerateData,
  ConfigError,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IntraPartEdge: return "IntraPartEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TargetInSet: return "TargetInSet";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::EtaTooSmall: return "EtaTooSmall";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::SizesExceedPart: return "SizesExceedPart";
    case ErrorCode::PartsNotDisjoint: return "PartsNotDisjoint";
    case ErrorCode::SubsetSpaceTooLarge: return "SubsetSpaceTooLarge";
    case ErrorCode::TooManyLowDegreeVertices: return "TooManyLowDegreeVertices";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::EnumerationTruncated: return "EnumerationTruncated";
    case ErrorCode::TupleSpaceTooLarge: return "TupleSpaceTooLarge";
    case ErrorCode::XiOutOfRange: return "XiOutOfRange";
    case ErrorCode::TOutOfRange: return "TOutOfRange";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "UnknownError";
}

}  // namespace tilinglab
