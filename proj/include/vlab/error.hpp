#pragma once

#include <stdexcept>
#include <string>

namespace vlab {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, non-symmetric or indefinite Gram matrix, bad generator.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A search exceeded its configured budget (node budget, box size, sample count).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (s <= n/2, m out of range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vlab
