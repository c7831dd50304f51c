// Copyright 2026 The floorloc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace floorloc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied malformed or out-of-contract input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Geometry does not support the requested computation (e.g. camera on
/// the ground plane, no detectable ground anywhere).
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// A search produced no admissible answer.
/// Ground-plane detection failed where a ground plane is required.
class NoGroundError : public DegenerateGeometryError {
 public:
  using DegenerateGeometryError::DegenerateGeometryError;
};

/// The observation produced no wall segments.
class EmptyExtractionError : public Error {
 public:
  using Error::Error;
};

class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or does not follow its schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace floorloc
