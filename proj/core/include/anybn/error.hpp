#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace anybn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network failed structural or numerical validation.
class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

/// Trial does not match the network's node count or a state is out of range.
class InvalidTrial : public Error {
 public:
  using Error::Error;
};

class InvalidEvidence : public Error {
 public:
  using Error::Error;
};

/// Network or snapshot text could not be parsed. Carries the 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Enumeration would exceed the joint-state budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double required, double budget)
      : Error("exact enumeration needs " + count(required) + " joint states, budget is " + count(budget)),
        required_(required) {}

  double required() const noexcept { return required_; }

 private:
  static std::string count(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

  double required_;
};

/// Bayes inversion found no parent assignment that can produce the child state.
class ZeroSupport : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

/// No positive-probability conforming trial could be found for the breeders.
class EmptyPopulation : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or tool configuration (unknown keys, bad values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace anybn
