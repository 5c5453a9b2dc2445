#pragma once

#include <stdexcept>
#include <string>

namespace spintime {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial packet has essentially no mass left on the grid after truncation.
struct NonNormalizable : Error {
  using Error::Error;
};

/// Wave mass has reached the neighborhood of the far wall; the grid is too short.
struct DomainTooSmall : Error {
  using Error::Error;
};

/// The density at a query point dropped below the node floor; the guidance
/// law is singular there.
struct NodeSingularity : Error {
  using Error::Error;
};

/// A trajectory exceeded the integrator step budget.
struct StepLimit : Error {
  using Error::Error;
};

/// Aborted-trajectory fraction too large to form a distribution.
struct TooManyAborts : Error {
  using Error::Error;
};

/// Two distributions do not share the same time binning.
struct BinningMismatch : Error {
  using Error::Error;
};

/// A required spin direction is missing from a distribution family.
struct MissingDirection : Error {
  using Error::Error;
};

/// The fit design matrix is rank-deficient for the requested output.
struct DegenerateDesign : Error {
  using Error::Error;
};

/// Experiment matrix fails the unitarity check.
struct NonUnitary : Error {
  using Error::Error;
};

/// Unitary is not of the required spin-decoupled block form.
struct NotDecoupled : Error {
  using Error::Error;
};

/// Bad configuration value or malformed input file.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace spintime
