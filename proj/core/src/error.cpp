#include "polyinv/error.hpp"

namespace polyinv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NegativeResidual: return "NegativeResidual";
    case ErrorKind::InsufficientGrid: return "InsufficientGrid";
    case ErrorKind::UnresolvedStates: return "UnresolvedStates";
    case ErrorKind::NoConfinement: return "NoConfinement";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::NoMinimum: return "NoMinimum";
  }
  return "Unknown";
}

}  // namespace polyinv
