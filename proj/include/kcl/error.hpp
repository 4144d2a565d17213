#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kcl {

enum class errc {
  duplicate_point,
  negative_weight,
  length_mismatch,
  missing_point,
  unknown_point,
  image_out_of_space,
  nonsingularity_violated,
  space_mismatch,
  invalid_parameter,
  bracket_failure,
  nonpositive_measure,
  decomposition_failure,
  positive_weight_required,
  corollary_violation,
  inconsistency_found,
  parse_error,
  overflow,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::duplicate_point: return "DuplicatePoint";
    case errc::negative_weight: return "NegativeWeight";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::missing_point: return "MissingPoint";
    case errc::unknown_point: return "UnknownPoint";
    case errc::image_out_of_space: return "ImageOutOfSpace";
    case errc::nonsingularity_violated: return "NonsingularityViolated";
    case errc::space_mismatch: return "SpaceMismatch";
    case errc::invalid_parameter: return "InvalidParameter";
    case errc::bracket_failure: return "BracketFailure";
    case errc::nonpositive_measure: return "NonpositiveMeasure";
    case errc::decomposition_failure: return "DecompositionFailure";
    case errc::positive_weight_required: return "PositiveWeightRequired";
    case errc::corollary_violation: return "CorollaryViolation";
    case errc::inconsistency_found: return "InconsistencyFound";
    case errc::parse_error: return "ParseError";
    case errc::overflow: return "Overflow";
  }
  return "Unknown";
}

// All library failures surface as kcl::error; code() identifies the kind.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  errc code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

}  // namespace kcl
