#pragma once

#include <stdexcept>
#include <string>

namespace summinc {

/// Bad construction input: non-positive weight, malformed config, exponents
/// outside 1 < k <= s, and similar contract violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Index outside the evaluated or stored range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A linear-domain quantity left the representable range. Callers that need
/// such values must switch to the log-domain accessors instead.
class OverflowError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Inconsistent run configuration (grids, tail limits, file formats).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem problem: unreadable input or unwritable output path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace summinc
