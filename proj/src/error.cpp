#include "wyd/error.hpp"

namespace wyd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Input: return "input error";
    case ErrorKind::NotHermitian: return "not-Hermitian error";
    case ErrorKind::NotPositive: return "not-positive error";
    case ErrorKind::NotNormalized: return "not-normalized error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Numerical: return "numerical error";
    case ErrorKind::InternalConsistency: return "internal-consistency error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace wyd
