#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "folpipe/fol/ast.hpp"

namespace folpipe::fol {

// Low-level cause of a parse failure, kept fine-grained so the error
// taxonomy can classify it without re-inspecting the text.
enum class ParseCause {
  EmptyInput,
  InputTooLong,
  UnbalancedParenthesis,
  UnexpectedToken,
  TrailingText,
  UnknownOperator,
  SpecialToken,
};

std::string_view to_string(ParseCause cause);

struct ParseFailure {
  ParseCause cause = ParseCause::UnexpectedToken;
  SourceSpan span;
  std::string detail;
};

struct ParseResult {
  FormulaPtr formula;
  std::optional<ParseFailure> failure;
  bool ok() const { return formula != nullptr; }
};

struct ParseOptions {
  std::size_t max_input_bytes = 64 * 1024;
};

// Parses one candidate formula (no ":::" gloss). Accepts the Unicode and
// ASCII operator sets mixed freely. Total: any input up to the length limit
// yields either a formula or a ParseFailure, never a crash.
ParseResult parse_formula(std::string_view text, const ParseOptions& options = {});

}  // namespace folpipe::fol
