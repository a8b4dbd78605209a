#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randshift {

enum class ErrorKind {
  InvalidInput,
  DiscontinuousShift,
  HorizonTooLarge,
  UnsupportedArity,
  NotApplicable,
  ConstructionFailed,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// that callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, std::string_view what) {
  if (!condition) fail(kind, std::string(what));
}

}  // namespace randshift
