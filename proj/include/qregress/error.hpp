#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qregress {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape, arity or index mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation needs a nonzero-norm state.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Value outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Collection too small for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Min/max scale with max <= min.
class DegenerateScaleError : public Error {
 public:
  using Error::Error;
};

/// Input table lacks a required column or is otherwise malformed.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A single data row could not be parsed.
class RowError : public SchemaError {
 public:
  RowError(std::size_t line, const std::string& what)
      : SchemaError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Training produced a non-finite cost.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t iteration)
      : Error("non-finite cost at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Network or file-system failure while retrieving data. `status()` is the
/// HTTP status code, or 0 when no response was received.
class FetchError : public Error {
 public:
  FetchError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal conditions collected by operations that proceed anyway
/// (clamped inputs, flagged records, degenerate neuron phases).
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const noexcept { return warnings.empty(); }
};

}  // namespace qregress
