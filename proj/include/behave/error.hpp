// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace behave {

enum class ErrorCode {
  MalformedRow,
  UnknownAction,
  NonMonotonicFrame,
  InvalidConfig,
  MissingProfile,
  UnknownPhrase,
  BadMagic,
  VersionMismatch,
  TruncatedFile,
  TrailingBytes,
  DimMismatch,
  NonFiniteValue,
  DuplicateId,
  MissingEmbedding,
  ZeroVector,
  EmptyDataset,
  EmptyInput,
  SingleCluster,
  SingleClass,
  DivisionByZero,
  UnknownGame,
  IoError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library. `what()` is prefixed with the error name
/// so command-line callers can report it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace behave
