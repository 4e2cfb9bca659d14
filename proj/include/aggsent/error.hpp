#pragma once

#include <stdexcept>
#include <string>

namespace aggsent {

/// Base of every error the library throws. `kind()` is a stable
/// machine-readable tag used by the CLI's single-line error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error("input", w) {}
};

/// Parse failure tied to a position in an input file.
struct ParseError : Error {
  ParseError(const std::string& source, std::size_t line, const std::string& w)
      : Error("parse", source + ":" + std::to_string(line) + ": " + w), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct EstimationError : Error {
  explicit EstimationError(const std::string& w) : Error("estimation", w) {}
};

struct UndefinedRatioError : Error {
  explicit UndefinedRatioError(const std::string& w) : Error("undefined_ratio", w) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& w) : Error("convergence", w) {}
};

}  // namespace aggsent
