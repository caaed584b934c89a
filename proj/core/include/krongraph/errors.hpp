#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace krongraph {

// Two error families: ValidationError for malformed inputs or arguments
// (CLI exit code 1), NumericError for failures of the estimation itself
// such as non-positive-definite inputs (CLI exit code 2).  Each carries a
// short stable code ("MissingCell", "ZeroVariance", ...) next to the
// human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace krongraph
