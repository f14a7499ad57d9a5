#pragma once

#include <stdexcept>
#include <string>

namespace eabandit {

enum class ErrorKind {
  kConfig,      // invalid configuration or usage
  kIo,          // unreadable / unwritable files
  kFormat,      // malformed input content
  kNumeric,     // singular systems, non-convergence, undefined statistics
  kComparison,  // incompatible run directories
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error format_error(const std::string& what) {
  return Error(ErrorKind::kFormat, what);
}
inline Error numeric_error(const std::string& what) {
  return Error(ErrorKind::kNumeric, what);
}

// Process exit code for the command-line tool: 1 usage, 2 I/O, 3 numeric.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return 1;
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kComparison:
      return 2;
    case ErrorKind::kNumeric:
      return 3;
  }
  return 1;
}

}  // namespace eabandit
