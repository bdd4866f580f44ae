#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace semio {

enum class ErrorKind { parse, reference, validation, precondition, cap };

// Every failure the engine reports goes through this type; the CLI maps
// the kind to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : Error(ErrorKind::cap, "enumeration cap exceeded: " + std::to_string(required) +
                                  " tuples required, cap is " + std::to_string(cap)),
        required_(required) {}
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace semio
