#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace agentattack {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class InfeasibleAttackError : public Error {
 public:
  explicit InfeasibleAttackError(const std::string& what) : Error("infeasible", what) {}
};

class GridError : public Error {
 public:
  explicit GridError(const std::string& what) : Error("grid", what) {}
};

/// Raised with the full list of violations found by a validator.
class ValidationError : public Error {
 public:
  ValidationError(std::string kind, std::vector<std::string> violations)
      : Error(std::move(kind), join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace agentattack
