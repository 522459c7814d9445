// Copyright 2026 The atsg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATSG_ERROR_HPP_
#define ATSG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace atsg {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid input supplied by the caller (bad file, bad flag,
// invariant violated by user data).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

enum class GameErrorKind {
  kMalformed,
  kCycleDetected,
  kInfosetPlayerMismatch,
  kInfosetActionMismatch,
  kPerfectRecallViolation,
};

class GameError : public InputError {
 public:
  GameError(GameErrorKind kind, const std::string& what)
      : InputError(what), kind_(kind) {}
  GameErrorKind kind() const noexcept { return kind_; }

 private:
  GameErrorKind kind_;
};

class EmptySequence : public Error {
 public:
  EmptySequence() : Error("init() of the empty sequence") {}
};

// Simplex could not pick a pivot of acceptable magnitude.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

// Node or time cap reached before a solver finished.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class TimeLimitExceeded : public ResourceLimit {
 public:
  TimeLimitExceeded() : ResourceLimit("time limit exceeded") {}
};

class EnumerationCapExceeded : public Error {
 public:
  EnumerationCapExceeded(long long count, long long cap)
      : Error("follower pure strategy count " + std::to_string(count) +
              " exceeds cap " + std::to_string(cap)),
        count_(count) {}
  long long count() const noexcept { return count_; }

 private:
  long long count_;
};

}  // namespace atsg

#endif  // ATSG_ERROR_HPP_
