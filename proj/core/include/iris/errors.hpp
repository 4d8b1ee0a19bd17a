#pragma once

#include <stdexcept>
#include <string>

namespace iris {

// Machine-checkable failure codes carried by every library exception.
enum class Errc {
  io_error,              // unreadable/corrupt file, bad magic, short read
  bad_config,            // invalid parameter value (ranges, modes, targets)
  invalid_geometry,      // circle/ring outside image, non-positive radius
  pupil_not_found,       // no plausible dark disk in the image
  limbic_not_found,      // no qualifying brightness maximum in either sector
  odd_dimensions,        // transform/encoder input dims not divisible as required
  dimension_mismatch,    // operands disagree in shape, encoder, or bit count
  degenerate_input,      // empty matrix/vector where content is required
  degenerate_std,        // zero/negative standard deviation where one is needed
  too_few_scores,        // fewer scores than the statistic requires
  too_few_templates,     // fewer than two templates to pair up
  empty_identity,        // enrolled identity with no templates
  unreachable_target,    // no threshold attains the requested rate within a decade
  format_error,          // template/CSV parse failure
  counting_mismatch,     // score bookkeeping disagrees with closed-form counts
};

const char* errc_name(Errc code) noexcept;

// Single exception type for the whole library; `code()` distinguishes causes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::io_error: return "io_error";
    case Errc::bad_config: return "bad_config";
    case Errc::invalid_geometry: return "invalid_geometry";
    case Errc::pupil_not_found: return "pupil_not_found";
    case Errc::limbic_not_found: return "limbic_not_found";
    case Errc::odd_dimensions: return "odd_dimensions";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::degenerate_input: return "degenerate_input";
    case Errc::degenerate_std: return "degenerate_std";
    case Errc::too_few_scores: return "too_few_scores";
    case Errc::too_few_templates: return "too_few_templates";
    case Errc::empty_identity: return "empty_identity";
    case Errc::unreachable_target: return "unreachable_target";
    case Errc::format_error: return "format_error";
    case Errc::counting_mismatch: return "counting_mismatch";
  }
  return "unknown";
}

}  // namespace iris
