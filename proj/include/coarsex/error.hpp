#pragma once

#include <stdexcept>
#include <string>

namespace coarsex {

enum class ErrorKind {
  Domain,
  Precondition,
  Construction,
  Resource,
  Validation,
  Unsupported,
  Input,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace coarsex
