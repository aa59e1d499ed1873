#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "folpipe/fol/ast.hpp"
#include "folpipe/fol/parse.hpp"

namespace folpipe::predicates {

struct PredicateSignature {
  std::string name;
  int arity = 0;

  bool operator==(const PredicateSignature&) const = default;
  auto operator<=>(const PredicateSignature&) const = default;
  std::string to_string() const { return name + "/" + std::to_string(arity); }
};

using PredicateSet = std::set<PredicateSignature>;

// Result of reading a "Predicates:" section. The declaration list keeps
// order and multiplicity (the verifier's majority rule needs them); the set
// view collapses duplicates.
struct PredicateDecls {
  std::vector<PredicateSignature> declarations;
  struct Defect {
    std::size_t line_no = 0;
    std::string text;
    fol::ParseFailure error;
  };
  std::vector<Defect> defects;

  PredicateSet unique() const;
};

// Each line contributes one declaration; semicolon-separated one-line forms
// ("Class(x); Prereq(x, y)") are also accepted. Glosses after ":::" are
// ignored. Malformed declarations are skipped and reported as defects.
PredicateDecls parse_predicate_decls(const std::vector<std::string>& lines);

// Every atom in the statements contributes (predicate, argument count).
PredicateSet extract_used_predicates(const std::vector<fol::Statement>& statements);
PredicateSet extract_used_predicates(const std::vector<fol::FormulaPtr>& formulas);

struct ArityConflict {
  std::string name;
  std::vector<int> arities;              // sorted ascending
  std::map<int, int> occurrences;        // arity -> observation count
};

// One conflict per name appearing with two or more distinct arities in
// declared ∪ used.
std::vector<ArityConflict> check_arity_consistency(const PredicateSet& declared,
                                                   const PredicateSet& used);

// Multiplicity-aware variant over a raw declaration sequence.
std::vector<ArityConflict> arity_conflicts(const std::vector<PredicateSignature>& declarations);

struct SubjectPredicateConflict {
  std::string predicate;
  std::string constant;
};

// Names used both as a predicate and as a constant argument, compared
// case-insensitively ("Platypus(platypus)").
std::vector<SubjectPredicateConflict> detect_subject_predicate_conflict(
    const std::vector<fol::Statement>& statements);

enum class MatchMode { NameAndArity, NameOnly };

struct PredicateMetrics {
  // Raw integer counts; coverage() and usage() derive the exact ratios.
  std::size_t intersection = 0;
  std::size_t px_size = 0;
  std::size_t py_size = 0;
  bool valid = false;
  bool degenerate = false;  // an empty side forced the 1.0 convention

  double coverage() const { return py_size == 0 ? 1.0 : double(intersection) / double(py_size); }
  double usage() const { return px_size == 0 ? 1.0 : double(intersection) / double(px_size); }
};

// Coverage = |Px∩Py| / |Py|, Usage = |Px∩Py| / |Px|. Empty-set convention:
// an empty denominator yields 1.0 with the degenerate flag set.
PredicateMetrics compute_metrics(const PredicateSet& px, const PredicateSet& py, bool valid,
                                 MatchMode mode = MatchMode::NameAndArity);

}  // namespace folpipe::predicates
