#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "folpipe/fol/ast.hpp"

namespace folpipe::taxonomy {

enum class ErrorGroup { Parsing, Type, Token, Predicate, Formatting };

enum class ErrorKind {
  // Parsing
  MissingQuantifier,
  ParenthesisError,
  CompletionError,
  // Type (the tool surfaces these as NoneType failures)
  QuantifierLocation,
  MissingVariable,
  // Token
  SpecialToken,
  UnknownOperator,
  // Predicate
  ArityMismatch,
  SubjectPredicateConflict,
  // Formatting
  FormatViolation,
};

ErrorGroup group_of(ErrorKind kind);
std::string_view to_string(ErrorGroup group);
std::string_view to_string(ErrorKind kind);

// Lower sorts first: lexing fails before parsing, parsing before type and
// predicate checks. Within Type, the re-quantification pattern outranks the
// constant-fact pattern.
int priority(ErrorKind kind);

struct ErrorCategory {
  ErrorKind kind = ErrorKind::FormatViolation;
  ErrorGroup group() const { return group_of(kind); }
  bool operator==(const ErrorCategory&) const = default;
};

enum class StatementSection { Predicates, Premise, Conclusion };

std::string_view to_string(StatementSection section);

struct StatementRef {
  StatementSection section = StatementSection::Premise;
  std::size_t index = 0;
};

struct ErrorReport {
  ErrorCategory category;
  std::optional<StatementRef> statement;  // absent for formatting and record-level defects
  std::optional<fol::SourceSpan> span;    // relative to the statement text
  std::string detail;
};

}  // namespace folpipe::taxonomy
