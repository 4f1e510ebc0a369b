#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clgbn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a precondition (bad index, mismatched skeletons, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data or model text could not be interpreted.
class DataError : public Error {
 public:
  using Error::Error;
};

// Parse failure tied to a 1-based line of a text file.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace clgbn
