#pragma once

#include <stdexcept>
#include <string>

namespace hdta {

// Malformed input: bad references, negative delays, syntax errors.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well-formed but outside what the library decides
// (e.g. history-determinism of Buchi automata).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A diagonal atom could not be decided on a region because one of its
// operands is above its maximal constant.
class DiagonalError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

class NotHistoryDeterministicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdta
