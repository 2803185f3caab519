#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wfollow {

/// Malformed text input; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Invalid scenario configuration. `field` is a dotted path such as
/// `pedestrians[1].speed`; `line` is 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::size_t line, const std::string& what)
      : std::runtime_error(format(field, line, what)), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line, const std::string& what) {
    std::string s = field.empty() ? std::string("config") : field;
    if (line > 0) s += " (line " + std::to_string(line) + ")";
    return s + ": " + what;
  }
  std::string field_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Innovation covariance could not be factorized.
class DegenerateCovariance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a simulation step.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace wfollow
