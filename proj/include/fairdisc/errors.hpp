#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairdisc {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON etc.). byte_offset is 0-based into the input.
struct ParseError : Error {
  std::size_t byte_offset;
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), byte_offset(offset) {}
};

// Structurally well-formed input that violates a documented invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Mismatched sizes between otherwise valid objects (coloring vs. universe, ...).
struct DimensionError : Error {
  using Error::Error;
};

// A scalar argument is outside its documented range.
struct ParameterError : Error {
  using Error::Error;
};

// An analytic bound was queried outside the region where it is stated.
struct DomainError : Error {
  using Error::Error;
};

// A caller-supplied object does not satisfy an operation's stated precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// The requested computation exceeds the configured state budget.
// `visited` is the number of states examined before giving up; when the full
// requirement is known up front it is the total requirement instead.
struct CapacityError : Error {
  unsigned long long visited;
  CapacityError(const std::string& what, unsigned long long count)
      : Error(what), visited(count) {}
};

}  // namespace fairdisc
