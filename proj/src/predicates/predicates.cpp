#include "folpipe/predicates/predicates.hpp"

#include <algorithm>
#include <cctype>

#include "folpipe/fol/analysis.hpp"

namespace folpipe::predicates {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_gloss(std::string_view s) {
  const auto pos = s.find(":::");
  return trim(pos == std::string_view::npos ? s : s.substr(0, pos));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

PredicateSet PredicateDecls::unique() const {
  return PredicateSet(declarations.begin(), declarations.end());
}

PredicateDecls parse_predicate_decls(const std::vector<std::string>& lines) {
  PredicateDecls out;
  for (std::size_t line_no = 0; line_no < lines.size(); ++line_no) {
    const std::string body = strip_gloss(lines[line_no]);
    // Split semicolon-separated declarations; a trailing ';' leaves an empty
    // segment which is skipped.
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t end = body.find(';', start);
      if (end == std::string::npos) end = body.size();
      const std::string segment = trim(std::string_view(body).substr(start, end - start));
      start = end + 1;
      if (segment.empty()) continue;
      fol::ParseResult parsed = fol::parse_formula(segment);
      if (!parsed.ok()) {
        out.defects.push_back({line_no, segment, *parsed.failure});
        continue;
      }
      if (parsed.formula->kind != fol::Connective::Atom) {
        out.defects.push_back(
            {line_no, segment,
             fol::ParseFailure{fol::ParseCause::UnexpectedToken,
                               parsed.formula->span,
                               "declaration must be a single predicate"}});
        continue;
      }
      out.declarations.push_back(
          {parsed.formula->label, static_cast<int>(parsed.formula->args.size())});
    }
  }
  return out;
}

PredicateSet extract_used_predicates(const std::vector<fol::FormulaPtr>& formulas) {
  PredicateSet out;
  for (const auto& f : formulas) {
    if (!f) continue;
    fol::for_each_atom(*f, [&](const fol::Formula& atom) {
      out.insert({atom.label, static_cast<int>(atom.args.size())});
    });
  }
  return out;
}

PredicateSet extract_used_predicates(const std::vector<fol::Statement>& statements) {
  std::vector<fol::FormulaPtr> fs;
  fs.reserve(statements.size());
  for (const auto& s : statements) fs.push_back(s.formula);
  return extract_used_predicates(fs);
}

namespace {

std::vector<ArityConflict> conflicts_from_counts(
    const std::map<std::string, std::map<int, int>>& counts) {
  std::vector<ArityConflict> out;
  for (const auto& [name, by_arity] : counts) {
    if (by_arity.size() < 2) continue;
    ArityConflict c;
    c.name = name;
    for (const auto& [arity, n] : by_arity) {
      c.arities.push_back(arity);
      c.occurrences[arity] = n;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<ArityConflict> check_arity_consistency(const PredicateSet& declared,
                                                   const PredicateSet& used) {
  std::map<std::string, std::map<int, int>> counts;
  for (const auto& sig : declared) counts[sig.name][sig.arity] += 1;
  for (const auto& sig : used) counts[sig.name][sig.arity] += 1;
  return conflicts_from_counts(counts);
}

std::vector<ArityConflict> arity_conflicts(const std::vector<PredicateSignature>& declarations) {
  std::map<std::string, std::map<int, int>> counts;
  for (const auto& sig : declarations) counts[sig.name][sig.arity] += 1;
  return conflicts_from_counts(counts);
}

std::vector<SubjectPredicateConflict> detect_subject_predicate_conflict(
    const std::vector<fol::Statement>& statements) {
  // folded name -> original spelling, first occurrence wins
  std::map<std::string, std::string> predicates_seen;
  std::map<std::string, std::string> constants_seen;
  for (const auto& s : statements) {
    if (!s.formula) continue;
    fol::for_each_atom(*s.formula, [&](const fol::Formula& atom) {
      predicates_seen.emplace(lower(atom.label), atom.label);
      for (const fol::Term& t : atom.args) {
        if (!t.is_variable()) constants_seen.emplace(lower(t.name), t.name);
      }
    });
  }
  std::vector<SubjectPredicateConflict> out;
  for (const auto& [folded, pred] : predicates_seen) {
    const auto it = constants_seen.find(folded);
    if (it != constants_seen.end()) out.push_back({pred, it->second});
  }
  return out;
}

PredicateMetrics compute_metrics(const PredicateSet& px, const PredicateSet& py, bool valid,
                                 MatchMode mode) {
  PredicateMetrics m;
  m.valid = valid;
  if (mode == MatchMode::NameAndArity) {
    m.px_size = px.size();
    m.py_size = py.size();
    for (const auto& sig : px) {
      if (py.count(sig)) ++m.intersection;
    }
  } else {
    std::set<std::string> nx, ny;
    for (const auto& sig : px) nx.insert(sig.name);
    for (const auto& sig : py) ny.insert(sig.name);
    m.px_size = nx.size();
    m.py_size = ny.size();
    for (const auto& n : nx) {
      if (ny.count(n)) ++m.intersection;
    }
  }
  m.degenerate = m.px_size == 0 || m.py_size == 0;
  return m;
}

}  // namespace folpipe::predicates
