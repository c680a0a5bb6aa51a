// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/error.hpp"

namespace behave {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownAction: return "UnknownAction";
    case ErrorCode::NonMonotonicFrame: return "NonMonotonicFrame";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MissingProfile: return "MissingProfile";
    case ErrorCode::UnknownPhrase: return "UnknownPhrase";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnknownGame: return "UnknownGame";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace behave
