#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pathforge/ast.hpp"

namespace pathforge {

struct Diagnostic {
  std::string code;     // "syntax-error", "unsupported-construct", ...
  std::string message;
  SourceSpan span;
};

std::string format_diagnostic(const std::string& path, const Diagnostic& d);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string code, std::string message, SourceSpan span)
      : std::runtime_error(message), code_(std::move(code)), span_(span) {}

  const std::string& code() const { return code_; }
  SourceSpan span() const { return span_; }
  bool unsupported() const { return code_ == "unsupported-construct"; }

 private:
  std::string code_;
  SourceSpan span_;
};

class TypeError : public std::runtime_error {
 public:
  enum class Kind { Conflict, Unresolved, Other };

  TypeError(Kind kind, std::string var, std::string message)
      : std::runtime_error(message), kind_(kind), var_(std::move(var)) {}

  Kind kind() const { return kind_; }
  const std::string& var() const { return var_; }

 private:
  Kind kind_;
  std::string var_;
};

}  // namespace pathforge
