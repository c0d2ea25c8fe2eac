// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ccsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Preconditions on sizes/values violated.
struct InvalidParameters : Error {
  using Error::Error;
};

// Unknown user / index out of range.
struct LookupError : Error {
  using Error::Error;
};

// A coefficient-matrix strategy could not produce a decodable matrix.
struct GenerationInfeasible : Error {
  using Error::Error;
};

// Channel geometry leaves a null space of the wrong dimension.
struct DegenerateChannel : Error {
  using Error::Error;
};

// A user submatrix is singular where invertibility is required.
struct DecodabilityError : Error {
  using Error::Error;
};

// Optimizer could not start or make progress.
struct SolverError : Error {
  using Error::Error;
};

struct FileError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ccsim
