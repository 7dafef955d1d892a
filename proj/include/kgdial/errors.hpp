// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <stdexcept>
#include <string>

namespace kgdial {

/// Base class for all library errors. `kind()` is stable and used by the
/// CLI to map errors onto exit codes (user/input errors exit 2, runtime
/// failures exit 1).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define KGDIAL_DEFINE_ERROR(NAME)                               \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& message)                   \
        : Error(#NAME, message) {}                              \
  }

// Input / data errors.
KGDIAL_DEFINE_ERROR(ParseError);
KGDIAL_DEFINE_ERROR(ValidationError);
KGDIAL_DEFINE_ERROR(LookupError);
KGDIAL_DEFINE_ERROR(AlignmentError);
KGDIAL_DEFINE_ERROR(EmptyContextError);
KGDIAL_DEFINE_ERROR(ConfigError);
KGDIAL_DEFINE_ERROR(InvalidArgumentError);
KGDIAL_DEFINE_ERROR(MissingDomainError);
KGDIAL_DEFINE_ERROR(DegenerateValidationError);
KGDIAL_DEFINE_ERROR(DegenerateTrainingError);
KGDIAL_DEFINE_ERROR(EmptyCandidatesError);
KGDIAL_DEFINE_ERROR(IoError);

// Runtime / backend errors.
KGDIAL_DEFINE_ERROR(ScorerUnavailable);
KGDIAL_DEFINE_ERROR(GeneratorUnavailable);
KGDIAL_DEFINE_ERROR(ProtocolError);

#undef KGDIAL_DEFINE_ERROR

/// True for error kinds caused by bad user input or data files, as opposed
/// to runtime failures (gateway down, protocol violations).
bool is_user_error(const Error& e);

}  // namespace kgdial
