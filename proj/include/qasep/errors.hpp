#pragma once

#include <stdexcept>
#include <string>

namespace qasep {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A denominator q-Pochhammer factor vanished before the series terminated.
struct DenominatorPole : Error {
  using Error::Error;
};

struct InvalidParams : Error {
  using Error::Error;
};

// State space would exceed the enumeration guard.
struct WindowTooLarge : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Quadrature doubling limit hit with relative change above tolerance.
struct NoConvergence : Error {
  using Error::Error;
};

// Imaginary part of a probability output exceeded threshold.
struct NonRealResult : Error {
  using Error::Error;
};

struct OrderingViolation : Error {
  using Error::Error;
};

// A rational-factor denominator came too close to a quadrature node.
struct PoleOnGrid : Error {
  using Error::Error;
};

struct ConfigInvalid : Error {
  using Error::Error;
};

}  // namespace qasep
