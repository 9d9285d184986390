#pragma once

#include <stdexcept>

namespace kmpmd {

// Malformed or invalid input (instance documents, metrics, parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured enumeration guard would be exceeded. Never silently approximated.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant of the engine or solver was broken. Signals a bug.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kmpmd
