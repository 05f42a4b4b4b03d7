#include "entrokey/error.hpp"

namespace entrokey {

void throw_config(const std::string& message) { throw Error(ErrorKind::Config, message); }
void throw_data(const std::string& message) { throw Error(ErrorKind::Data, message); }
void throw_io(const std::string& message) { throw Error(ErrorKind::Io, message); }

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Stage: return "stage failure";
  }
  return "error";
}

}  // namespace entrokey
