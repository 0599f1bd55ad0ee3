#pragma once

#include <stdexcept>
#include <string>

namespace lcot {

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (shape mismatch, bad weights, ...).
struct validation_error : error {
  using error::error;
};

/// Malformed problem or report file.
struct parse_error : error {
  using error::error;
};

/// The solver could not proceed within tolerance; reported, never silently wrong.
struct numeric_error : error {
  using error::error;
};

}  // namespace lcot
