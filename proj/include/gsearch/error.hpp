#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsearch {

/// A caller broke a documented precondition (illegal action, undo on an empty
/// history, terminal value of a live position).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evaluation range with max(|M|,|m|) == 0 or M == m where a spread is needed.
class DegenerateRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad configuration. Carries the 1-based line number when it came from a file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsearch
