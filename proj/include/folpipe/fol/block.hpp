#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "folpipe/fol/ast.hpp"
#include "folpipe/fol/parse.hpp"
#include "folpipe/predicates/predicates.hpp"

namespace folpipe::fol {

enum class FormattingCause {
  EmptyInput,
  MissingSection,
  OutOfOrderSection,
  DuplicateSection,
  EmptySection,
  MultipleConclusions,
};

std::string_view to_string(FormattingCause cause);

// The generation never reaches the tool: headers absent, out of order, or a
// section empty.
struct FormattingFailure {
  FormattingCause cause = FormattingCause::MissingSection;
  std::string detail;
};

// One statement line of a record. `formula` is null when the line failed to
// parse; the failure is kept so one bad line does not void the record.
struct ParsedStatement {
  std::string text;  // formula source, gloss stripped
  std::optional<std::string> gloss;
  std::size_t line_no = 0;  // 0-based line within the block
  FormulaPtr formula;
  std::optional<ParseFailure> error;

  bool ok() const { return formula != nullptr; }
  Statement statement() const { return {formula, gloss}; }
};

struct TranslationRecord {
  predicates::PredicateDecls declared;
  std::vector<ParsedStatement> premises;
  ParsedStatement conclusion;

  bool all_statements_parse() const;
  // Premises plus conclusion, skipping lines that failed to parse.
  std::vector<Statement> parsed_statements() const;
  std::vector<FormulaPtr> parsed_premises() const;
  predicates::PredicateSet declared_set() const { return declared.unique(); }
};

struct BlockParseResult {
  std::optional<TranslationRecord> record;
  std::optional<FormattingFailure> failure;
  bool ok() const { return record.has_value(); }
};

struct BlockOptions {
  // Incremental stage-2 outputs carry no Predicates section of their own.
  bool require_predicates_section = true;
};

// Splits a full model generation into Predicates / Premises / Conclusion
// sections and parses each formula individually. Section headers accept the
// "Premise_First-order:" style aliases; statement lines may end with ';'.
BlockParseResult parse_translation_block(std::string_view text,
                                         const BlockOptions& options = {});

}  // namespace folpipe::fol
