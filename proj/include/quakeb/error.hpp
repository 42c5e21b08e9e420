#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quakeb {

/// Base class for all quakeb errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable files. CLI exit code 2.
struct IoError : Error {
  using Error::Error;
};

/// Malformed file content (bad token, wrong column count, bad header). CLI exit code 2.
struct ParseError : Error {
  using Error::Error;
};

/// Invariant violations and bad arguments. CLI exit code 1.
struct ValidationError : Error {
  using Error::Error;
};

/// Not enough events/vectors to satisfy a request; carries what was achievable.
struct InsufficientDataError : ValidationError {
  InsufficientDataError(const std::string& msg, std::size_t achievable_count)
      : ValidationError(msg), achievable(achievable_count) {}
  std::size_t achievable;
};

}  // namespace quakeb
