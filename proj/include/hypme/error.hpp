#pragma once

#include <stdexcept>
#include <string>

namespace hypme {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (edge lists, group expressions, words, rationals).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A search or enumeration ran out of its work budget before finishing.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hypme
