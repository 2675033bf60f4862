#pragma once

#include <stdexcept>
#include <string>

namespace opcalc {

enum class ErrorKind {
  input,         // malformed or out-of-contract argument
  precondition,  // a mathematical precondition failed (e.g. root in [0,1])
  numerical,     // an iteration did not converge or a residual is too large
  summability,   // a hereditary series cannot be certified to converge
  construction,  // a self-verifying construction failed its own check
  unsupported,   // well-formed request outside what the routine handles
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace opcalc
