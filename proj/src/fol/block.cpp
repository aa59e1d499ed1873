#include "folpipe/fol/block.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace folpipe::fol {

std::string_view to_string(FormattingCause cause) {
  switch (cause) {
    case FormattingCause::EmptyInput: return "empty input";
    case FormattingCause::MissingSection: return "missing section";
    case FormattingCause::OutOfOrderSection: return "sections out of order";
    case FormattingCause::DuplicateSection: return "duplicate section";
    case FormattingCause::EmptySection: return "empty section";
    case FormattingCause::MultipleConclusions: return "conclusion must be a single statement";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool iequals_prefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

enum Section { kPredicates = 0, kPremises = 1, kConclusion = 2, kNone = -1 };

struct HeaderAlias {
  std::string_view name;
  Section section;
};

// Longest aliases first so "premise_first-order" wins over "premise".
constexpr std::array<HeaderAlias, 8> kAliases{{
    {"premises_first-order", kPremises},
    {"premise_first-order", kPremises},
    {"conclusion_first-order", kConclusion},
    {"predicates", kPredicates},
    {"predicate", kPredicates},
    {"conclusion", kConclusion},
    {"premises", kPremises},
    {"premise", kPremises},
}};

// Matches "<alias> :" at the start of a trimmed line; returns the section
// and the content after the colon.
std::optional<std::pair<Section, std::string>> match_header(const std::string& line) {
  for (const auto& alias : kAliases) {
    if (!iequals_prefix(line, alias.name)) continue;
    std::size_t i = alias.name.size();
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == ':') {
      return std::make_pair(alias.section, trim(std::string_view(line).substr(i + 1)));
    }
  }
  return std::nullopt;
}

ParsedStatement parse_statement_line(const std::string& line, std::size_t line_no) {
  ParsedStatement st;
  st.line_no = line_no;
  std::string body = trim(line);
  if (!body.empty() && body.back() == ';') body = trim(std::string_view(body).substr(0, body.size() - 1));
  const auto gpos = body.find(":::");
  if (gpos != std::string::npos) {
    st.gloss = trim(std::string_view(body).substr(gpos + 3));
    body = trim(std::string_view(body).substr(0, gpos));
  }
  st.text = body;
  ParseResult parsed = parse_formula(body);
  if (parsed.ok()) {
    st.formula = parsed.formula;
  } else {
    st.error = parsed.failure;
  }
  return st;
}

}  // namespace

bool TranslationRecord::all_statements_parse() const {
  return conclusion.ok() &&
         std::all_of(premises.begin(), premises.end(),
                     [](const ParsedStatement& s) { return s.ok(); });
}

std::vector<Statement> TranslationRecord::parsed_statements() const {
  std::vector<Statement> out;
  for (const auto& p : premises) {
    if (p.ok()) out.push_back(p.statement());
  }
  if (conclusion.ok()) out.push_back(conclusion.statement());
  return out;
}

std::vector<FormulaPtr> TranslationRecord::parsed_premises() const {
  std::vector<FormulaPtr> out;
  for (const auto& p : premises) {
    if (p.ok()) out.push_back(p.formula);
  }
  return out;
}

BlockParseResult parse_translation_block(std::string_view text, const BlockOptions& options) {
  auto failed = [](FormattingCause cause, std::string detail) {
    return BlockParseResult{std::nullopt, FormattingFailure{cause, std::move(detail)}};
  };

  if (trim(text).empty()) return failed(FormattingCause::EmptyInput, "empty generation");

  struct Line {
    std::string text;
    std::size_t line_no;
  };
  std::array<std::vector<Line>, 3> content;
  std::array<bool, 3> seen{false, false, false};
  Section current = kNone;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    const std::size_t this_line = line_no++;
    start = end + 1;

    if (auto header = match_header(line)) {
      const Section s = header->first;
      if (seen[s]) return failed(FormattingCause::DuplicateSection, std::string(to_string(FormattingCause::DuplicateSection)));
      if (current != kNone && s < current) {
        return failed(FormattingCause::OutOfOrderSection,
                      "section order must be Predicates, Premises, Conclusion");
      }
      seen[s] = true;
      current = s;
      if (!header->second.empty()) content[s].push_back({header->second, this_line});
      continue;
    }
    if (line.empty() || current == kNone) continue;  // blank or preamble
    content[current].push_back({line, this_line});
  }

  if (options.require_predicates_section && !seen[kPredicates]) {
    return failed(FormattingCause::MissingSection, "missing Predicates section");
  }
  if (!seen[kPremises]) return failed(FormattingCause::MissingSection, "missing Premises section");
  if (!seen[kConclusion]) return failed(FormattingCause::MissingSection, "missing Conclusion section");
  if (options.require_predicates_section && content[kPredicates].empty()) {
    return failed(FormattingCause::EmptySection, "Predicates section is empty");
  }
  if (content[kPremises].empty()) return failed(FormattingCause::EmptySection, "Premises section is empty");
  if (content[kConclusion].empty()) return failed(FormattingCause::EmptySection, "Conclusion section is empty");
  if (content[kConclusion].size() > 1) {
    return failed(FormattingCause::MultipleConclusions,
                  std::string(to_string(FormattingCause::MultipleConclusions)));
  }

  TranslationRecord record;
  std::vector<std::string> decl_lines;
  decl_lines.reserve(content[kPredicates].size());
  for (const auto& l : content[kPredicates]) decl_lines.push_back(l.text);
  record.declared = predicates::parse_predicate_decls(decl_lines);
  for (const auto& l : content[kPremises]) {
    record.premises.push_back(parse_statement_line(l.text, l.line_no));
  }
  record.conclusion =
      parse_statement_line(content[kConclusion][0].text, content[kConclusion][0].line_no);
  return BlockParseResult{std::move(record), std::nullopt};
}

}  // namespace folpipe::fol
