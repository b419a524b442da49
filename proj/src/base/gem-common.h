// base/gem-common.h

// Copyright 2026  The gemspoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GEM_BASE_GEM_COMMON_H_
#define GEM_BASE_GEM_COMMON_H_

#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gem {

/// Root of the error hierarchy.  Every error the toolkit raises derives from
/// this, so callers (mainly the command-line driver) can map categories to
/// exit codes without catching std::exception wholesale.
class GemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data that parsed but violates an invariant (duplicate ids, label/system
/// mismatch, missing trials).
class ValidationError : public GemError {
 public:
  using GemError::GemError;
};

/// Inconsistent or incomplete configuration (split specs, unknown keys).
class ConfigError : public GemError {
 public:
  using GemError::GemError;
};

/// A file that does not follow its declared format.
class FormatError : public GemError {
 public:
  using GemError::GemError;
};

/// Bad arguments to a pure function (dimension mismatch, non-finite values).
class InputError : public GemError {
 public:
  using GemError::GemError;
};

/// Training preconditions that only show up once data is seen.
class TrainingError : public GemError {
 public:
  using GemError::GemError;
};

class EvaluationError : public GemError {
 public:
  using GemError::GemError;
};

/// Filesystem failures; the message always carries the path.
class IoError : public GemError {
 public:
  using GemError::GemError;
};

namespace internal {

template <typename... Args>
std::string StrCat(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace internal

/// Controls whether GEM_WARN writes to stderr; tests silence it.
bool &WarningsEnabled();

/// Number of warnings emitted since process start (used by tests that
/// assert a code path is warning-free).
long WarningCount();

void EmitWarning(const std::string &msg);

}  // namespace gem

#define GEM_WARN(...) ::gem::EmitWarning(::gem::internal::StrCat(__VA_ARGS__))

#endif  // GEM_BASE_GEM_COMMON_H_
