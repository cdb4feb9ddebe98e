#pragma once

#include <stdexcept>
#include <string>

namespace polytheta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact integer arithmetic left the range of the coefficient type.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A precondition or structural invariant was violated by the caller.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace polytheta
