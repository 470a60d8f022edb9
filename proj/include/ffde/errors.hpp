#ifndef FFDE_ERRORS_HPP
#define FFDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ffde {

enum class ErrorCode {
  invalid_argument,
  construction,
  newton_divergence,
  profile_not_found,
  insufficient_data,
  mismatched_trajectories,
  file_format,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ffde

#endif
