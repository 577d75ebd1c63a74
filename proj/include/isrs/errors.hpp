#pragma once

#include <stdexcept>
#include <string>

namespace isrs {

/// Invalid physical parameter (non-positive width, amplitude, mass...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arrays or bases that do not describe the same grid / Hilbert space.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration that is well-formed but physically unusable, e.g. a
/// phonon frequency that does not land on a grid bin.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isrs
