#pragma once

#include <stdexcept>
#include <string>

namespace supgmg {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDegenerateCell = 2,
  kSingularMatrix = 3,
  kNoAnalyticSolution = 4,
  kIo = 5,
};

// Single exception type for the library; the code survives the trip across
// the C boundary.
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

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace supgmg
