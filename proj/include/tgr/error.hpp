#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tgr {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A value was used outside the set it is defined on (coding domain, alphabet).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structural constraint violated (rule shape, undeclared symbol, bad system).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace tgr
