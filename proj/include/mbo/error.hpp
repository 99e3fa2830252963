#pragma once

#include <stdexcept>
#include <string>

namespace mbo {

enum class ErrorKind {
  InvalidInput,
  DegenerateDeterminant,
  DimensionMismatch,
  Contract,
  UnderResolved,
  OutOfRange,
  Config,
  Format,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mbo
