#pragma once

#include <stdexcept>
#include <string>

namespace tcg {

// Base of every error the library throws. Callers that only care about
// "did the pipeline fail" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string path, int line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), path_(std::move(path)), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

 private:
  std::string path_;
  int line_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class DuplicateClassError : public Error {
 public:
  using Error::Error;
};

// Corrupt or unsupported artifact file (graph, index, dataset).
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Network failure that survived every retry.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int last_status, int attempts)
      : Error(what), last_status_(last_status), attempts_(attempts) {}

  int last_status() const noexcept { return last_status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int last_status_;
  int attempts_;
};

// 401/403. Never retried.
class AuthError : public TransportError {
 public:
  using TransportError::TransportError;
};

}  // namespace tcg
