// Copyright 2026 The qpt Authors
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

namespace qpt {

// Base class for every error raised by the library.
class QptError : public std::runtime_error {
 public:
  explicit QptError(const std::string& message) : std::runtime_error(message) {}
};

// Operand shapes do not conform.
class DimensionError : public QptError {
 public:
  explicit DimensionError(const std::string& message) : QptError(message) {}
};

// A state, channel, POVM or record violates its physical invariants.
class InvalidInputError : public QptError {
 public:
  explicit InvalidInputError(const std::string& message) : QptError(message) {}
};

// A design (input ensemble or POVM collection) is not informationally complete,
// so the corresponding Gram matrix cannot be inverted.
class SingularDesignError : public QptError {
 public:
  explicit SingularDesignError(const std::string& message) : QptError(message) {}
};

// Malformed configuration or serialized document.
class FormatError : public QptError {
 public:
  explicit FormatError(const std::string& message) : QptError(message) {}
};

}  // namespace qpt
