#pragma once

#include <stdexcept>
#include <string>

namespace vbsmpe {

enum class ErrorCode {
  usage,
  parse,
  validation,
  index,
  no_solution,
  capacity,
  total_conflict,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::index: return "index";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::total_conflict: return "total-conflict";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace vbsmpe
