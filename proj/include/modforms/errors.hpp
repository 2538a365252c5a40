#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace modforms {

// Error category decides the CLI exit code: verification failures map to
// exit 1, data/precision problems to exit 2, usage errors to exit 3.
enum class ErrorKind { verification, data, usage };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail_verification(const std::string& code,
                                           const std::string& msg) {
  throw Error(ErrorKind::verification, code, msg);
}

[[noreturn]] inline void fail_data(const std::string& code,
                                   const std::string& msg) {
  throw Error(ErrorKind::data, code, msg);
}

[[noreturn]] inline void fail_usage(const std::string& msg) {
  throw Error(ErrorKind::usage, "usage", msg);
}

}  // namespace modforms
