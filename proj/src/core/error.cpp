#include "error.hpp"

namespace oer {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::schema: return "schema";
    case ErrorCode::io: return "io";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::fit: return "fit";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::spec: return "spec";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace oer
