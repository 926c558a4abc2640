#pragma once

#include <stdexcept>
#include <string>

namespace oer {

enum class ErrorCode {
  argument,     // bad parameter or precondition violation
  parse,        // malformed input text
  schema,       // input text well-formed but columns/labels don't match
  io,           // filesystem failure
  empty_input,  // no usable rows
  fit,          // estimation impossible (e.g. a class is absent)
  degenerate,   // a quantity the operation needs is undefined for this data
  spec,         // invalid generator/experiment specification
  internal,     // unexpected state
};

/// Library failure. Carries a stable code so bindings can map errors
/// without parsing message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace oer
