#pragma once

#include <stdexcept>
#include <string>

namespace mapeval {

// Error taxonomy mirrors the CLI exit codes: malformed or unreadable input
// (ParseError, IoError, IntegrityError) exits 1; structurally valid input
// that cannot satisfy the request (SemanticError) exits 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class SemanticError : public Error {
 public:
  explicit SemanticError(const std::string& msg) : Error(msg) {}
};

}  // namespace mapeval
