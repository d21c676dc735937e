#pragma once

#include <stdexcept>
#include <string>

namespace locsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its physical domain (eta, efficiency, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: dimension mismatch, mode collision,
/// unsorted click stream, out-of-range index.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Netlist text could not be parsed; carries the offending 1-based line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parameter binding does not cover the circuit's parameters exactly.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// The requested simulation is inconsistent with the model
/// (e.g. probabilities exceeding one, degenerate fit).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Configuration file problem; message carries file/line context.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace locsim
