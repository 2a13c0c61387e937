#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mpalign {

// Error kinds map onto CLI exit codes: config/usage problems exit 2,
// everything else exits 1.
enum class ErrorKind { config, parse, io, numeric, logic };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_config(std::string msg) {
  throw Error(ErrorKind::config, std::move(msg));
}

[[noreturn]] inline void fail_parse(std::string msg) {
  throw Error(ErrorKind::parse, std::move(msg));
}

[[noreturn]] inline void fail_io(std::string msg) {
  throw Error(ErrorKind::io, std::move(msg));
}

[[noreturn]] inline void fail_numeric(std::string msg) {
  throw Error(ErrorKind::numeric, std::move(msg));
}

[[noreturn]] inline void fail_logic(std::string msg) {
  throw Error(ErrorKind::logic, std::move(msg));
}

}  // namespace mpalign
