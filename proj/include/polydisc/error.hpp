#pragma once

#include <stdexcept>
#include <string>

namespace polydisc {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,        // point or parameter outside the admissible region
  grid_guard = 3,    // torus grid too coarse for the coefficient degree
  parse = 4,
  io = 5,
  unconverged = 6,
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

}  // namespace polydisc
