#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peri {

/// Malformed or invalid configuration. Line/column are 1-based, 0 when the
/// error is not tied to a location in a file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step produced a non-finite value.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::size_t node, double t, double rhs_norm, const std::string& detail)
      : std::runtime_error(detail + " (node " + std::to_string(node) + ", t = " +
                           std::to_string(t) + " s, rhs norm = " + std::to_string(rhs_norm) + ")"),
        detail_(detail),
        node_(node),
        t_(t),
        rhs_norm_(rhs_norm) {}

  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return t_; }
  double rhs_norm() const noexcept { return rhs_norm_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t node_;
  double t_;
  double rhs_norm_;
};

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace peri
