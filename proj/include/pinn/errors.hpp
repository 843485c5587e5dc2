#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pinn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (bad dimension, index, order...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A transport mapping exceeded its declared bound on a sampled weight.
class TransportBoundError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity needs data the problem does not carry.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DivergedError : public Error {
 public:
  DivergedError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace pinn
