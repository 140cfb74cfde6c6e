#pragma once

#include <stdexcept>
#include <string>

namespace rankcount {

// Failures caused by the data itself: contradictory labels, degenerate fits,
// unresolvable ids. The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed files. The CLI maps these to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rankcount
