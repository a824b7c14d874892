// error.hpp
// Exception hierarchy shared by every wavemodels component.

#pragma once

#include <stdexcept>
#include <string>

namespace wavemodels {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, config key or parameter range. Carries the offending key path when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string key_path = {})
      : Error(key_path.empty() ? msg : key_path + ": " + msg), key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Caller combined arguments that cannot work together (e.g. fields on different grids).
class UsageError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavemodels
