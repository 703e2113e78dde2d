#pragma once

#include <stdexcept>
#include <string>

namespace lal {

/// Raised when an exact/enumeration routine is asked for a problem size
/// above its documented cap.
class CapExceeded : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised on malformed or out-of-contract input data (files, records,
/// samples). Messages carry line numbers or indices where available.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lal
