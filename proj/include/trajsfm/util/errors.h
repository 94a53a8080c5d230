#pragma once

#include <stdexcept>
#include <string>

namespace trajsfm {

// Base class of every error raised by the library. Callers that only need to
// report failures can catch this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File content does not follow the expected container layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Payload shorter than its header announces.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Values that parse but violate a domain invariant (NaN flow, constant depth,
// mismatched sizes, too few inputs, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Query outside the domain of a field.
class RangeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure of one pipeline stage, keeping the stage name so that the
// command line tool can report where the run stopped.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message,
             bool input_error = false)
      : Error("[" + stage + "] " + message),
        stage_(std::move(stage)),
        input_error_(input_error) {}

  const std::string& stage() const { return stage_; }
  // True when the failure stems from missing or malformed input files.
  bool input_error() const { return input_error_; }

 private:
  std::string stage_;
  bool input_error_;
};

}  // namespace trajsfm
