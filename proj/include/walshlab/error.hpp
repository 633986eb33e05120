#ifndef WALSHLAB_ERROR_HPP
#define WALSHLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace walshlab {

enum class Errc {
  invalid_argument,       // bad user input / config
  precondition_violation, // caller broke an operation contract
  invariant_violation,    // a verified construction property failed
  cannot_certify,         // finite scan cannot certify the required fact
  prefix_too_short,       // sequence prefix exhausted mid-construction
  out_of_range,           // value exceeds the exact representable range
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

} // namespace walshlab

#endif
