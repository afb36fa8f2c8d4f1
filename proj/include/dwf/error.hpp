#pragma once

#include <stdexcept>
#include <string>

namespace dwf {

enum class ErrorKind {
  Capability,    // requested jet order or dimension beyond what the engine supports
  Domain,        // evaluation left the smooth locus (slit, non-positive sqrt, ...)
  Singular,      // singular or ill-conditioned linear system
  Schema,        // malformed run specification
  Semantic,      // well-formed but invalid values (e.g. Randers |b| >= 1)
  Precondition,  // operation called outside its declared hypothesis
  Argument,      // bad call arguments (sizes, indices)
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dwf
