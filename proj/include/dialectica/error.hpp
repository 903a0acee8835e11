#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dialectica {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the formula parser; position is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("syntax error at " + std::to_string(position) + ": " + message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SortError : public Error {
 public:
  using Error::Error;
};

// A constructed object or enumeration would exceed the configured size cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

// Principle or theorem instantiated with parts that violate its side conditions.
class SideConditionError : public Error {
 public:
  using Error::Error;
};

// Malformed doctrine input, or a structure the doctrine does not provide.
class DoctrineError : public Error {
 public:
  using Error::Error;
};

}  // namespace dialectica
