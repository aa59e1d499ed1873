#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "folpipe/fol/block.hpp"
#include "folpipe/taxonomy/category.hpp"

namespace folpipe::taxonomy {

// Maps the outcome of parse_translation_block onto the taxonomy. Total: a
// FormattingFailure yields a single Formatting report, a record yields one
// report per defect, a clean record yields none. Reports come back sorted by
// priority, so the first one is the record's headline category.
//
// Prover feedback, when supplied, is pattern-matched against the known tool
// messages and used only when no structural defect was found (structural
// classification wins on conflict).
std::vector<ErrorReport> classify(const fol::BlockParseResult& parsed,
                                  std::optional<std::string_view> prover_feedback = std::nullopt);

// Taxonomy kind a standalone parse failure maps to.
ErrorKind kind_for_parse_cause(fol::ParseCause cause);

// Pattern table for tool feedback strings ("used with multiple arities", a
// "NoneType" trace, ...). Returns nothing when the string matches no pattern.
std::optional<ErrorCategory> classify_feedback(std::string_view feedback);

// Highest-priority category, or nothing for an empty report list.
std::optional<ErrorCategory> headline(const std::vector<ErrorReport>& reports);

}  // namespace folpipe::taxonomy
