#pragma once

#include <stdexcept>
#include <string>

namespace edgecount {

// Malformed or unreadable input data (bad CSV, dimension mismatch, corrupt
// graph file). Distinct from std::invalid_argument, which flags a caller
// passing parameters outside an operation's domain.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed quantity violated an identity it must satisfy, e.g. a negative
// variance radicand beyond rounding tolerance.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace edgecount
