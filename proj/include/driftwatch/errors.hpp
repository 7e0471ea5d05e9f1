// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace driftwatch {

// Base for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define DRIFTWATCH_DEFINE_ERROR(NAME)                        \
  class NAME : public Error {                                \
   public:                                                   \
    explicit NAME(const std::string& what) : Error(#NAME, what) {} \
  }

DRIFTWATCH_DEFINE_ERROR(EmptyWindow);
DRIFTWATCH_DEFINE_ERROR(EmptyInput);
DRIFTWATCH_DEFINE_ERROR(NonFiniteInput);
DRIFTWATCH_DEFINE_ERROR(InvalidK);
DRIFTWATCH_DEFINE_ERROR(EmptySample);
DRIFTWATCH_DEFINE_ERROR(BadEdges);
DRIFTWATCH_DEFINE_ERROR(EdgeMismatch);
DRIFTWATCH_DEFINE_ERROR(BadEps);
DRIFTWATCH_DEFINE_ERROR(BadBucketWidth);
DRIFTWATCH_DEFINE_ERROR(EmptyTraining);
DRIFTWATCH_DEFINE_ERROR(UnknownFeature);
DRIFTWATCH_DEFINE_ERROR(IoError);
DRIFTWATCH_DEFINE_ERROR(FormatVersionMismatch);
DRIFTWATCH_DEFINE_ERROR(CorruptFile);
DRIFTWATCH_DEFINE_ERROR(InsufficientScores);
DRIFTWATCH_DEFINE_ERROR(BadParams);
DRIFTWATCH_DEFINE_ERROR(BadConfig);

#undef DRIFTWATCH_DEFINE_ERROR

}  // namespace driftwatch
