#pragma once

#include <stdexcept>

namespace nls {

// Base class for failures of the numerical machinery (CLI exit code 1).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shooting could not bracket an overshooting initial height; typically the
// requested frequency lies at or beyond mu_star.
struct NoBracketError : SolverError {
  using SolverError::SolverError;
};

// A solve finished but its residual certificates are out of tolerance.
struct NonConvergentError : SolverError {
  using SolverError::SolverError;
};

struct OverflowError : SolverError {
  using SolverError::SolverError;
};

struct StepUnderflowError : SolverError {
  using SolverError::SolverError;
};

// truncate() found no zero of g above the first positive-energy height.
struct NoZeroFoundError : SolverError {
  using SolverError::SolverError;
};

struct UnsupportedRegimeError : SolverError {
  using SolverError::SolverError;
};

// find_normalized() found no frequency bracket for the requested mass.
struct NoSolutionError : SolverError {
  using SolverError::SolverError;
};

struct EmptyCurveError : SolverError {
  using SolverError::SolverError;
};

struct InsufficientSamplesError : SolverError {
  using SolverError::SolverError;
};

struct WrongFamilyError : SolverError {
  using SolverError::SolverError;
};

// Command-line misuse (CLI exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nls
