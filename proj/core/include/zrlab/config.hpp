#pragma once

// Sectioned key-value configuration:
//
//   # comment
//   [grid]
//   n = 256
//   length = 64
//   [experiment]
//   kind = conserve
//
// Sections are [grid], [params], [stepper], [experiment] and [output].
// Values are numbers (a fraction "a/b" is accepted), comma-separated lists,
// true/false, or strings (optionally double-quoted). Keys not meaningful for
// the experiment kind are rejected.

#include <optional>
#include <string>
#include <vector>

#include "zrlab/experiments.hpp"

namespace zrlab {

/// Parses `text`, applies `overrides` ("section.key=value", applied in order
/// after the file) and validates the result. If `kind` is given it selects
/// the experiment; a conflicting experiment.kind in the text is an error.
/// Throws ConfigError (with the line number for syntax errors).
ExperimentSpec parse_config(const std::string& text, std::optional<ExperimentKind> kind = std::nullopt,
                            const std::vector<std::string>& overrides = {});

/// Fully resolved text form; parse_config(emit_config(s)) == s.
std::string emit_config(const ExperimentSpec& spec);

/// "section.key" names accepted for `kind`, in emission order.
std::vector<std::string> config_keys(ExperimentKind kind);

}  // namespace zrlab
