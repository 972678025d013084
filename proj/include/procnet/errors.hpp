#pragma once

#include <stdexcept>
#include <string>

namespace procnet {

// Base for every error the library raises. `category()` is a short stable
// token ("syntax", "scope", ...) that the command-line front end prints as a
// machine-parsable prefix.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error("syntax", std::to_string(line) + ":" + std::to_string(column) +
                            ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ScopeError : public Error {
 public:
  explicit ScopeError(const std::string& message) : Error("scope", message) {}
};

class FreshnessViolation : public Error {
 public:
  explicit FreshnessViolation(const std::string& message)
      : Error("freshness", message) {}
};

class ModeViolation : public Error {
 public:
  explicit ModeViolation(const std::string& message) : Error("mode", message) {}
};

class BoundExceeded : public Error {
 public:
  explicit BoundExceeded(const std::string& message)
      : Error("bound", message) {}
};

class ArityError : public Error {
 public:
  explicit ArityError(const std::string& message) : Error("arity", message) {}
};

class DistinctnessError : public Error {
 public:
  explicit DistinctnessError(const std::string& message)
      : Error("distinctness", message) {}
};

}  // namespace procnet
