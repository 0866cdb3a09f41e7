#pragma once

#include <stdexcept>
#include <string>

namespace lexsev {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input, malformed file contents or an unmapped label.
class IngestionError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration or parameter outside its valid range.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A computation whose inputs leave it undefined (e.g. an empty task side).
class EvaluationError : public Error {
public:
  using Error::Error;
};

}  // namespace lexsev
