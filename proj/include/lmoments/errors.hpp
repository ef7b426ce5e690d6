#pragma once

#include <stdexcept>
#include <string>

namespace lmoments {

// Bad arguments: composite moduli, malformed cuts, unknown modes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed object failed its own consistency checks.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmoments
