#pragma once

#include <stdexcept>
#include <string>

namespace cul {

// Base for all typed errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension disagreement between operands.
struct ShapeError : Error {
  using Error::Error;
};

// Malformed input text (edge lists, CSV, config). Message carries the line
// number where applicable.
struct ParseError : Error {
  using Error::Error;
};

// A norm fell below the epsilon guard where a nonzero vector is required.
// This is the trivial-solution collapse; the CLI maps it to exit code 3.
struct ZeroNormError : Error {
  using Error::Error;
};

// Non-finite values, refused problem sizes, and other numeric contract breaks.
struct NumericError : Error {
  using Error::Error;
};

// Invalid configuration (flags, generator specs, config files).
struct ConfigError : Error {
  using Error::Error;
};

// File system trouble: missing or unwritable paths.
struct IoError : Error {
  using Error::Error;
};

// Stored artifact does not match expectations (schema version, encoder kind,
// digests). The CLI maps it to exit code 4.
struct ArtifactError : Error {
  using Error::Error;
};

}  // namespace cul
