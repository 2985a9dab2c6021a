#ifndef SONIFY_ERROR_HPP
#define SONIFY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sonify {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration: presets, job files, mapping limits, plan consistency.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Bad input data: ragged tables, missing columns, non-monotonic series.
class DataError : public Error {
public:
  using Error::Error;
};

/// File system or encoding failure.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace sonify

#endif  // SONIFY_ERROR_HPP
