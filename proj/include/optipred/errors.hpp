// Copyright 2026 The optipred Authors.
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

namespace optipred {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: dimension mismatches, non-external
/// evaluation points, invalid weights, bad problem files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The node set does not determine a unique polynomial of the requested
/// degree (the Vandermonde matrix is rank deficient).
class UnisolvenceError : public Error {
 public:
  using Error::Error;
};

/// The Gram matrix of a design is singular: some nonzero polynomial has
/// zero variance under the measure.
class DegenerateDesignError : public Error {
 public:
  using Error::Error;
};

/// The linear programming solver could not produce an optimal solution.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The brute-force oracle was asked to enumerate more points than allowed.
class OracleCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace optipred
