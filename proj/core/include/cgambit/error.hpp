#pragma once

#include <stdexcept>

namespace cgambit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: bad JSON, schema violations, unresolvable names.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cgambit
