#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrcc {

enum class ErrorCode {
  DimensionMismatch,
  ZeroRow,
  SylvesterSingular,
  RankDeficient,
  IndexOutOfRange,
  BaseMismatch,
  InvalidArgument,
  DegenerateCovariance,
  CholeskyFailed,
  LineSearchFailed,
  DegenerateTruth,
  ConfigError,
  DataError,
  SolverFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace lrcc
