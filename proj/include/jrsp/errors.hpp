// Copyright 2026 The jrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace jrsp {

// Register would exceed the configured qubit cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A qubit label lies outside the register.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed argument: wrong dimension, empty selection, bad enum text.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical invariant (completeness, Hermiticity, unitarity) failed.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// User-supplied data violates a domain constraint (normalization, special-case
// equalities, eta range).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace jrsp
