// Copyright 2026 The qitekit Authors
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

namespace qitekit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on qubit count or vector/matrix shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the operation's domain (empty pool, D = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured size limit (qubits, domain width, ...).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, vanishing norms, empty retained subspaces.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files and configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qitekit
