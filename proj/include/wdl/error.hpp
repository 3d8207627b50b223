#pragma once

#include <stdexcept>
#include <string>

namespace wdl {

// Mirrors the integer codes of the C API (wdl.h).
enum class ErrorCode : int {
  InvalidArgument = 1,
  NotPrime = 2,
  Inadmissible = 3,
  Precondition = 4,
  InfiniteLength = 5,
  Parse = 6,
  Io = 7,
  Data = 8,
  Internal = 9,
};

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

}  // namespace wdl
