#pragma once

#include <stdexcept>
#include <string>

namespace stiefel {

// Shape or length mismatch between operands.
class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scalar or index argument outside its admissible range.
class ParameterError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point violates a feasibility precondition (e.g. not on the manifold).
class FeasibilityError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structurally inconsistent data discovered during validation.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message names the offending field.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative kernel failed to converge or produced non-finite values.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stiefel
