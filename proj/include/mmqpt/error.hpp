/**
 * Copyright 2026 The mmqpt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace mmqpt {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside a documented contract: wrong
/// dimensionality, out-of-range reflectivity, malformed data, and so on.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation could not produce a trustworthy number (degenerate
/// normalisation, singular inversion, internal consistency failure).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Circuit DSL syntax or semantic error, with a 1-based source position.
class ParseError : public ValidationError {
 public:
  ParseError(int line, int column, const std::string& message)
      : ValidationError("line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace mmqpt
