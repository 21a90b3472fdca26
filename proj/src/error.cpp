#include "axrel/error.hpp"

namespace axrel {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroOperand: return "ZeroOperand";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ExhaustiveTooLarge: return "ExhaustiveTooLarge";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::EmptyTensor: return "EmptyTensor";
    case Errc::NonFiniteWeight: return "NonFiniteWeight";
    case Errc::CodeOutOfRange: return "CodeOutOfRange";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidFaultSite: return "InvalidFaultSite";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ModelLoadFailure: return "ModelLoadFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace axrel
