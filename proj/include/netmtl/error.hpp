#pragma once

#include <stdexcept>
#include <string>

namespace netmtl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on user-supplied inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (eigensolver, factorization, rank).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The adaptive recursion blew up during a simulation run.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace netmtl
