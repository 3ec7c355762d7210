#include "rulegraph/error.hpp"

namespace rulegraph {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_configuration: return "invalid-configuration";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::degenerate_world: return "degenerate-world";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace rulegraph
