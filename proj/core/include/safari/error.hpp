#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace safari {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model, netlist, observation or DIMACS text. `line()` is 1-based,
/// 0 when the error is not tied to a particular line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A well-formed model that violates a structural requirement (SD unsatisfiable,
/// OBS and COMPS overlap, ...).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// SD together with the observation is unsatisfiable, so no diagnosis exists.
class ObservationInconsistent : public Error {
 public:
  using Error::Error;
};

/// An exhaustive computation was refused because the instance is too large.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The forced component-output assignment is not unique for the given
/// observation and diagnosis, so ambiguity groups are undefined.
class WfdsViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace safari
