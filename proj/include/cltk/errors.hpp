#pragma once

#include <stdexcept>
#include <string>

namespace cltk {

// Exit-code categories used by the CLI. Keep stable; they are documented
// in the README.
enum class ErrorCode {
  Parse = 2,
  Type = 3,
  Unsupported = 4,
  Eval = 5,
  Verification = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ParseError : Error {
  ParseError(int line, int col, const std::string& msg)
      : Error(ErrorCode::Parse, "parse error at " + std::to_string(line) + ":" +
                                    std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct TypeError : Error {
  explicit TypeError(const std::string& msg) : Error(ErrorCode::Type, msg) {}
};

struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& msg)
      : Error(ErrorCode::Unsupported, msg) {}
};

struct EvalError : Error {
  explicit EvalError(const std::string& msg) : Error(ErrorCode::Eval, msg) {}
};

struct UnboundTemplateVar : EvalError {
  explicit UnboundTemplateVar(const std::string& name)
      : EvalError("unbound template variable: " + name) {}
};

struct MissingObservable : EvalError {
  MissingObservable(const std::string& label, long long day)
      : EvalError("missing observable: " + label + " at day " +
                  std::to_string(day)) {}
};

struct UnboundVar : EvalError {
  explicit UnboundVar(const std::string& name)
      : EvalError("unbound variable: " + name) {}
};

}  // namespace cltk
