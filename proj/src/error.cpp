#include "multival/error.hpp"

namespace multival {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InvalidValuation: return "InvalidValuation";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InconsistentTargets: return "InconsistentTargets";
    case ErrorKind::SameValuation: return "SameValuation";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::NonDecreasingDiscrepancy: return "NonDecreasingDiscrepancy";
    case ErrorKind::UnsupportedRing: return "UnsupportedRing";
    case ErrorKind::UnsupportedArity: return "UnsupportedArity";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::NotInClosure: return "NotInClosure";
    case ErrorKind::NoInstance: return "NoInstance";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
  }
  return "Error";
}

}  // namespace multival
