// Copyright 2026 The ZSIE Authors.
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

#ifndef ZSIE_ERRORS_H_
#define ZSIE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace zsie {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, CoNLL, oracle files). Line and column are
// 1-based; zero means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, int line = 0, int column = 0)
      : Error(Format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string Format(const std::string &what, int line, int column) {
    if (line == 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  int line_;
  int column_;
};

// Structurally valid input that breaks a domain invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string &what, std::vector<std::string> details)
      : Error(what), details_(std::move(details)) {}
  explicit ValidationError(const std::string &what) : Error(what) {}

  const std::vector<std::string> &details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

// A template cannot be applied to a candidate of the given shape.
class VerbalizationError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a remote service (tagger, NLI sidecar, entity service).
class TransportError : public Error {
 public:
  TransportError(const std::string &what, bool retryable)
      : Error(what), retryable_(retryable) {}

  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// A remote service answered, but the payload breaks the wire contract.
class ProtocolError : public TransportError {
 public:
  explicit ProtocolError(const std::string &what)
      : TransportError(what, false) {}
};

// The requested run cannot be set up with the given inputs and config.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace zsie

#endif  // ZSIE_ERRORS_H_
