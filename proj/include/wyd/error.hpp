#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wyd {

enum class ErrorKind {
  Input,
  NotHermitian,
  NotPositive,
  NotNormalized,
  Domain,
  Numerical,
  InternalConsistency,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All failures raised by the library carry a kind so callers (the CLI in
// particular) can map them onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace wyd
