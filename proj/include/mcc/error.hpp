#pragma once

#include <stdexcept>
#include <string>

namespace mcc {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  parse = 3,
  validation = 4,
  capacity = 5,
  io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

struct CapacityError : Error {
  explicit CapacityError(const std::string& what)
      : Error(ErrorKind::capacity, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace mcc
