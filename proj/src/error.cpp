#include "coarsex/error.hpp"

namespace coarsex {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Construction: return "construction error";
    case ErrorKind::Resource: return "resource error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Input: return "input error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace coarsex
