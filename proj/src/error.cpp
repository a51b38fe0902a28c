#include "orr/error.hpp"

namespace orr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::presentation: return "E_PRESENTATION";
    case ErrorCode::composition_domain: return "E_COMPOSITION_DOMAIN";
    case ErrorCode::reversion: return "E_REVERSION";
    case ErrorCode::symmetry_violation: return "E_SYMMETRY_VIOLATION";
    case ErrorCode::truncation_unsound: return "E_TRUNCATION_UNSOUND";
    case ErrorCode::degenerate_bundle: return "E_DEGENERATE_BUNDLE";
    case ErrorCode::base_mismatch: return "E_BASE_MISMATCH";
    case ErrorCode::invalid_excess: return "E_INVALID_EXCESS";
    case ErrorCode::incompatible: return "E_INCOMPATIBLE";
    case ErrorCode::not_a_unit: return "E_NOT_A_UNIT";
    case ErrorCode::beta_window: return "E_BETA_WINDOW";
    case ErrorCode::invalid_embedding: return "E_INVALID_EMBEDDING";
    case ErrorCode::internal_invariant: return "E_INTERNAL_INVARIANT";
    case ErrorCode::syntax: return "E_SYNTAX";
    case ErrorCode::unknown_identifier: return "E_UNKNOWN_IDENTIFIER";
    case ErrorCode::arity: return "E_ARITY";
    case ErrorCode::range: return "E_RANGE";
    case ErrorCode::duplicate_name: return "E_DUPLICATE_NAME";
    case ErrorCode::usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

}  // namespace orr
