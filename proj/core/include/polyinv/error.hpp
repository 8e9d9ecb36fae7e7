#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyinv {

/// Failure categories surfaced by the library. Pipelines record these as
/// per-sample statuses; the CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  NegativeResidual,
  InsufficientGrid,
  UnresolvedStates,
  NoConfinement,
  ZeroMatrix,
  NoMinimum,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace polyinv
