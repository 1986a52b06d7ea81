/*
 Copyright 2026 The ergodraw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace ergodraw {

/// Bad arguments, shapes, or configuration. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point handed to the basis lies outside the workspace.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Method/dynamics combination that a controller cannot handle.
class UnsupportedDynamicsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File could not be opened, read, or written. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents. Treated like an I/O failure by the CLI.
class ParseError : public IoError {
 public:
  using IoError::IoError;
};

/// Header is valid but asks for something we do not read (e.g. 16-bit PGM).
class UnsupportedFormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Non-finite values in integration or Riccati sweeps. Maps to CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergodraw
