#pragma once

#include <stdexcept>
#include <string>

namespace postbench {

enum class ErrorKind {
  InvalidPrior,
  InvalidStats,
  InvalidArgument,
  Ingest,
  Config,
};

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace postbench
