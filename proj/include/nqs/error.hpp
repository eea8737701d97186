// Copyright 2026 The nqs-phase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NQS_ERROR_HPP
#define NQS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nqs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad model parameters, e.g. too few sites for the requested bonds.
class InvalidSystemError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Hilbert space too large for full-basis / in-memory treatment.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string &what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NumericOverflowError : public Error {
 public:
  using Error::Error;
};

// Raised when a wavefunction or state vector vanishes identically.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class IncompleteSweepError : public Error {
 public:
  using Error::Error;
};

class NoInteriorExtremumError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace nqs

#endif  // NQS_ERROR_HPP
