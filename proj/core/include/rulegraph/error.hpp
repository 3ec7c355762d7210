#pragma once

#include <stdexcept>
#include <string>

namespace rulegraph {

enum class ErrorKind {
  invalid_configuration,
  invalid_input,
  degenerate_world,
  parse_error,
  io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rulegraph
