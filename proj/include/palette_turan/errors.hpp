#pragma once

#include <stdexcept>
#include <string>

namespace palette_turan {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input, out-of-range arguments, violated preconditions.
class invalid_input : public error {
 public:
  using error::error;
};

// A search was asked to run past its configured size guard.
class budget_exceeded : public error {
 public:
  using error::error;
};

// Something the mathematics guarantees did not happen: an implementation bug.
class invariant_violation : public error {
 public:
  using error::error;
};

}  // namespace palette_turan
