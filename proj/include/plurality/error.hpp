#pragma once

#include <stdexcept>
#include <string>

namespace plurality {

enum class ErrorCode {
  invalid_argument = 1,
  generation_failure,
  disconnected_graph,
  horizon_exhausted,
  threshold_inversion,
  io_error,
};

/// Exception carried through the C++ layer; the C API maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::invalid_argument, what);
}

}  // namespace plurality
