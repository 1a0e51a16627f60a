#pragma once

#include <stdexcept>
#include <string>

namespace gbzk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on an argument (odd grid size, b outside its range...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

// Configuration parse/validation failure; carries the offending line when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite or runaway state detected during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& msg, double time, int kx, int ky)
      : Error(msg), time_(time), kx_(kx), ky_(ky) {}
  double time() const noexcept { return time_; }
  int kx() const noexcept { return kx_; }
  int ky() const noexcept { return ky_; }

 private:
  double time_;
  int kx_;
  int ky_;
};

}  // namespace gbzk
