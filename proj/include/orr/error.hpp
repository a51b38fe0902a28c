#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orr {

/// Stable machine-readable error codes. The string forms are part of the
/// CLI's JSON output and must not change.
enum class ErrorCode {
  presentation,         // unknown symbol or malformed ring presentation
  composition_domain,   // series composition with nonzero constant term
  reversion,            // non-unit linear coefficient
  symmetry_violation,   // symmetric_reduce input not symmetric
  truncation_unsound,   // truncation order below the nilpotency bound
  degenerate_bundle,    // rank 0 bundle where rank >= 1 is required
  base_mismatch,        // bundles/elements over incompatible spaces
  invalid_excess,       // excess bundle not embeddable
  incompatible,         // orientations over different reference data
  not_a_unit,           // inverse of a non-unit
  beta_window,          // Laurent exponent escaped the declared window
  invalid_embedding,    // embedding record fails its constructor checks
  internal_invariant,   // engine self-check failed
  syntax,
  unknown_identifier,
  arity,
  range,
  duplicate_name,
  usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace orr
