#pragma once

#include <stdexcept>
#include <string>

namespace casht {

// Root bracket endpoints do not straddle a sign change.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested a quantity conditioned on F(T) > 0 where F(T) = 0
// (e.g. Pareto kappa at T <= x_min).
class ZeroMassError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Every gain row of a ratio game dropped; the believed hypothesis is
// indistinguishable from all competitors.
class DegenerateGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No action separates any alive pair (A2 violation at the current state).
class NoSeparatingActionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config text failed to parse or validate.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

}  // namespace casht
