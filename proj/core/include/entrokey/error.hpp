#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entrokey {

/// Broad failure class; the CLI maps these onto process exit codes.
enum class ErrorKind {
  Config,  // invalid parameters or configuration (exit 2)
  Data,    // malformed, inconsistent or missing input data (exit 3)
  Io,      // filesystem failures (exit 3)
  Stage,   // a pipeline stage aborted (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_config(const std::string& message);
[[noreturn]] void throw_data(const std::string& message);
[[noreturn]] void throw_io(const std::string& message);

std::string_view to_string(ErrorKind kind) noexcept;

}  // namespace entrokey
