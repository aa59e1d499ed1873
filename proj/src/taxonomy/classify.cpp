#include "folpipe/taxonomy/classify.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "folpipe/fol/analysis.hpp"

namespace folpipe::taxonomy {

ErrorGroup group_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingQuantifier:
    case ErrorKind::ParenthesisError:
    case ErrorKind::CompletionError:
      return ErrorGroup::Parsing;
    case ErrorKind::QuantifierLocation:
    case ErrorKind::MissingVariable:
      return ErrorGroup::Type;
    case ErrorKind::SpecialToken:
    case ErrorKind::UnknownOperator:
      return ErrorGroup::Token;
    case ErrorKind::ArityMismatch:
    case ErrorKind::SubjectPredicateConflict:
      return ErrorGroup::Predicate;
    case ErrorKind::FormatViolation:
      return ErrorGroup::Formatting;
  }
  return ErrorGroup::Formatting;
}

std::string_view to_string(ErrorGroup group) {
  switch (group) {
    case ErrorGroup::Parsing: return "Parsing";
    case ErrorGroup::Type: return "Type";
    case ErrorGroup::Token: return "Token";
    case ErrorGroup::Predicate: return "Predicate";
    case ErrorGroup::Formatting: return "Formatting";
  }
  return "?";
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingQuantifier: return "MissingQuantifier";
    case ErrorKind::ParenthesisError: return "ParenthesisError";
    case ErrorKind::CompletionError: return "CompletionError";
    case ErrorKind::QuantifierLocation: return "QuantifierLocation";
    case ErrorKind::MissingVariable: return "MissingVariable";
    case ErrorKind::SpecialToken: return "SpecialToken";
    case ErrorKind::UnknownOperator: return "UnknownOperator";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SubjectPredicateConflict: return "SubjectPredicateConflict";
    case ErrorKind::FormatViolation: return "FormatViolation";
  }
  return "?";
}

std::string_view to_string(StatementSection section) {
  switch (section) {
    case StatementSection::Predicates: return "predicates";
    case StatementSection::Premise: return "premise";
    case StatementSection::Conclusion: return "conclusion";
  }
  return "?";
}

int priority(ErrorKind kind) {
  switch (kind) {
    // Token
    case ErrorKind::SpecialToken: return 0;
    case ErrorKind::UnknownOperator: return 1;
    // Parsing
    case ErrorKind::ParenthesisError: return 10;
    case ErrorKind::CompletionError: return 11;
    case ErrorKind::MissingQuantifier: return 12;
    // Type
    case ErrorKind::QuantifierLocation: return 20;
    case ErrorKind::MissingVariable: return 21;
    // Predicate
    case ErrorKind::ArityMismatch: return 30;
    case ErrorKind::SubjectPredicateConflict: return 31;
    case ErrorKind::FormatViolation: return 40;
  }
  return 99;
}

ErrorKind kind_for_parse_cause(fol::ParseCause cause) {
  switch (cause) {
    case fol::ParseCause::UnbalancedParenthesis:
      return ErrorKind::ParenthesisError;
    case fol::ParseCause::TrailingText:
      return ErrorKind::CompletionError;
    case fol::ParseCause::SpecialToken:
      return ErrorKind::SpecialToken;
    case fol::ParseCause::UnknownOperator:
      return ErrorKind::UnknownOperator;
    case fol::ParseCause::UnexpectedToken:
    case fol::ParseCause::EmptyInput:
    case fol::ParseCause::InputTooLong:
      return ErrorKind::CompletionError;
  }
  return ErrorKind::CompletionError;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void classify_statement(const fol::ParsedStatement& st, StatementRef ref,
                        const std::set<std::string>& arity_conflicted,
                        std::vector<ErrorReport>& out) {
  if (!st.ok()) {
    out.push_back({ErrorCategory{kind_for_parse_cause(st.error->cause)}, ref,
                   st.error->span, st.error->detail});
    return;
  }
  const fol::Formula& f = *st.formula;

  const auto free = fol::free_variables(f);
  if (!free.empty()) {
    out.push_back({ErrorCategory{ErrorKind::MissingQuantifier}, ref, f.span,
                   "unbound variables: " +
                       join(std::vector<std::string>(free.begin(), free.end()), ", ")});
  }
  const auto requantified = fol::requantified_across_implication(f);
  if (!requantified.empty()) {
    out.push_back({ErrorCategory{ErrorKind::QuantifierLocation}, ref, f.span,
                   "variable re-quantified on both sides of an implication: " +
                       join(requantified, ", ")});
  }
  for (const auto& vq : fol::vacuous_quantifiers(f)) {
    out.push_back({ErrorCategory{ErrorKind::MissingVariable}, ref, vq.span,
                   "quantified variable '" + vq.var + "' never occurs in its body"});
  }
  for (const auto& cf : fol::constant_facts_under_quantifiers(f)) {
    // A constant fact whose predicate is arity-conflicted is the same
    // mistake as the mismatch; the Predicate report covers it.
    if (arity_conflicted.count(cf.predicate)) continue;
    out.push_back({ErrorCategory{ErrorKind::MissingVariable}, ref, cf.span,
                   "constant fact '" + cf.predicate + "' inside a quantifier scope"});
  }
}

}  // namespace

std::optional<ErrorCategory> classify_feedback(std::string_view feedback) {
  const std::string f = lower(feedback);
  if (f.find("used with multiple arities") != std::string::npos) {
    return ErrorCategory{ErrorKind::ArityMismatch};
  }
  if (f.find("a term cannot be constructed") != std::string::npos) {
    return ErrorCategory{ErrorKind::ParenthesisError};
  }
  if (f.find("unexpected token") != std::string::npos) {
    return ErrorCategory{ErrorKind::UnknownOperator};
  }
  if (f.find("nonetype") != std::string::npos) {
    return ErrorCategory{ErrorKind::QuantifierLocation};
  }
  return std::nullopt;
}

std::vector<ErrorReport> classify(const fol::BlockParseResult& parsed,
                                  std::optional<std::string_view> prover_feedback) {
  std::vector<ErrorReport> out;
  if (!parsed.ok()) {
    const auto& fail = *parsed.failure;
    out.push_back({ErrorCategory{ErrorKind::FormatViolation}, std::nullopt, std::nullopt,
                   fail.detail.empty() ? std::string(to_string(fail.cause)) : fail.detail});
    return out;
  }
  const fol::TranslationRecord& record = *parsed.record;

  const auto statements = record.parsed_statements();
  const auto used = predicates::extract_used_predicates(statements);
  const auto conflicts = predicates::check_arity_consistency(record.declared_set(), used);
  std::set<std::string> arity_conflicted;
  for (const auto& c : conflicts) arity_conflicted.insert(c.name);

  for (const auto& defect : record.declared.defects) {
    out.push_back({ErrorCategory{kind_for_parse_cause(defect.error.cause)},
                   StatementRef{StatementSection::Predicates, defect.line_no},
                   defect.error.span,
                   "bad predicate declaration '" + defect.text + "': " + defect.error.detail});
  }
  for (std::size_t i = 0; i < record.premises.size(); ++i) {
    classify_statement(record.premises[i], {StatementSection::Premise, i},
                       arity_conflicted, out);
  }
  classify_statement(record.conclusion, {StatementSection::Conclusion, 0},
                     arity_conflicted, out);

  for (const auto& conflict : conflicts) {
    std::string arities;
    for (std::size_t i = 0; i < conflict.arities.size(); ++i) {
      if (i) arities += ", ";
      arities += std::to_string(conflict.arities[i]);
    }
    out.push_back({ErrorCategory{ErrorKind::ArityMismatch}, std::nullopt, std::nullopt,
                   conflict.name + " used with arities {" + arities + "}"});
  }
  for (const auto& conflict : predicates::detect_subject_predicate_conflict(statements)) {
    out.push_back({ErrorCategory{ErrorKind::SubjectPredicateConflict}, std::nullopt,
                   std::nullopt,
                   "'" + conflict.predicate + "' used as predicate and as constant '" +
                       conflict.constant + "'"});
  }

  if (out.empty() && prover_feedback) {
    if (auto category = classify_feedback(*prover_feedback)) {
      out.push_back({*category, std::nullopt, std::nullopt,
                     "tool feedback: " + std::string(*prover_feedback)});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const ErrorReport& a, const ErrorReport& b) {
    return priority(a.category.kind) < priority(b.category.kind);
  });
  return out;
}

std::optional<ErrorCategory> headline(const std::vector<ErrorReport>& reports) {
  if (reports.empty()) return std::nullopt;
  const auto it = std::min_element(
      reports.begin(), reports.end(), [](const ErrorReport& a, const ErrorReport& b) {
        return priority(a.category.kind) < priority(b.category.kind);
      });
  return it->category;
}

}  // namespace folpipe::taxonomy
