// Copyright 2026 The hexsim Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hexsim {

/// Bad argument: size mismatch, out-of-range parameter, inconsistent configuration.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Text input that could not be parsed. `where` is a 0-based character
/// offset for Pauli strings and a 1-based line number for files.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t where)
        : std::runtime_error(what), where_(where) {
    }
    std::size_t where() const noexcept {
        return where_;
    }

  private:
    std::size_t where_;
};

/// A problem exceeds a configured resource cap (qubits, terms, contraction size).
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical consistency check failed (e.g. imaginary residue of a Hermitian expectation).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent tensor-network structure (label multiplicity, message shape, degenerate bond).
class StructureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnsupportedGateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace hexsim
