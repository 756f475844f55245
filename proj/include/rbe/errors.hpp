#pragma once

#include <stdexcept>
#include <string>

namespace rbe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid sizes, counts or parameters. `key()` names the offending setting
/// when the error comes from configuration parsing.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string key = {})
      : Error(msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A mathematically undefined request (degenerate pair, vacuum field, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbe
