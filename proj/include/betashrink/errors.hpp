#pragma once

#include <stdexcept>
#include <string>

namespace betashrink {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input outside the mathematical domain of an operation
struct DomainError : Error {
  using Error::Error;
};

// enumeration or tiling caps
struct ResourceError : Error {
  using Error::Error;
};

// rounding error too large to decide a predicate; raise precision
struct IndeterminateError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct UnsupportedError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace betashrink
