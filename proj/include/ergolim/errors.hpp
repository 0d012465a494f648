#pragma once

#include <stdexcept>
#include <string>

namespace ergolim {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejected input: mismatched dimensions, incompatible grids or backends.
struct InvalidInput : Error {
  using Error::Error;
};

struct DimensionMismatch : InvalidInput {
  using InvalidInput::InvalidInput;
};

/// A functional cannot be expressed on the requested backend.
struct FunctionalNotRepresentable : InvalidInput {
  using InvalidInput::InvalidInput;
};

/// Gram matrix lacks full column rank (or is too ill-conditioned to invert).
struct GramSingular : Error {
  GramSingular(const std::string& what, int column_rank_)
      : Error(what), column_rank(column_rank_) {}
  int column_rank;
};

/// Requested eigenvalue has no (numerical) eigenspace.
struct EmptyEigenspace : Error {
  using Error::Error;
};

/// Peripheral spectrum is not a set of roots of unity.
struct NotCyclic : Error {
  using Error::Error;
};

/// Contour passes too close to spectrum; resolvent ill-conditioned.
struct ContourTooTight : Error {
  using Error::Error;
};

/// Quadrature produced a non-idempotent operator.
struct ContourFailed : Error {
  using Error::Error;
};

/// TP = PT = lambda P does not hold for the supplied pair.
struct CommutationFailed : Error {
  using Error::Error;
};

/// An operator in a sequence does not share the reference fixed points.
struct SharedFixpointViolation : Error {
  using Error::Error;
};

}  // namespace ergolim
